#pragma once

#include "zodiaclab/config.hpp"
#include "zodiaclab/errors.hpp"
#include "zodiaclab/eval.hpp"
#include "zodiaclab/experiment.hpp"
#include "zodiaclab/features.hpp"
#include "zodiaclab/forest.hpp"
#include "zodiaclab/lexicon.hpp"
#include "zodiaclab/lexicon_json.hpp"
#include "zodiaclab/logreg.hpp"
#include "zodiaclab/mlp.hpp"
#include "zodiaclab/model.hpp"
#include "zodiaclab/model_json.hpp"
#include "zodiaclab/parallel.hpp"
#include "zodiaclab/population.hpp"
#include "zodiaclab/report_io.hpp"
#include "zodiaclab/rng.hpp"
#include "zodiaclab/train.hpp"
