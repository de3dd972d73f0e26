#pragma once

#include "nfr4/analysis.hpp"
#include "nfr4/dsl.hpp"
#include "nfr4/model.hpp"
#include "nfr4/report.hpp"
#include "nfr4/validate.hpp"
