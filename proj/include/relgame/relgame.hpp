#pragma once

#include "relgame/rational.hpp"
#include "relgame/interval.hpp"
#include "relgame/model.hpp"
#include "relgame/equilibrium.hpp"
#include "relgame/dynamics.hpp"
#include "relgame/ultimatum.hpp"
#include "relgame/document.hpp"
