#pragma once

#include "kkltype/chain.hpp"
#include "kkltype/cube.hpp"
#include "kkltype/errors.hpp"
#include "kkltype/inequalities.hpp"
#include "kkltype/io.hpp"
#include "kkltype/logspace.hpp"
#include "kkltype/normed.hpp"
#include "kkltype/quadrature.hpp"
#include "kkltype/random.hpp"
#include "kkltype/report.hpp"
#include "kkltype/scan.hpp"
#include "kkltype/sharpness.hpp"
#include "kkltype/suite.hpp"
#include "kkltype/weights.hpp"
#include "kkltype/zoo.hpp"
