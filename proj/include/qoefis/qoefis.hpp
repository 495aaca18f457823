#pragma once

#include "qoefis/dataset.hpp"
#include "qoefis/error.hpp"
#include "qoefis/evaluation.hpp"
#include "qoefis/fcm.hpp"
#include "qoefis/fuzzy.hpp"
#include "qoefis/model_io.hpp"
#include "qoefis/pipeline.hpp"
#include "qoefis/rule_induction.hpp"
#include "qoefis/stats.hpp"
#include "qoefis/synthetic.hpp"
