// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#pragma once

#include "pabsa/augment.hpp"
#include "pabsa/classifier.hpp"
#include "pabsa/corpus.hpp"
#include "pabsa/error.hpp"
#include "pabsa/eval.hpp"
#include "pabsa/experiment.hpp"
#include "pabsa/features.hpp"
#include "pabsa/lexicon.hpp"
#include "pabsa/matrix.hpp"
#include "pabsa/model_io.hpp"
#include "pabsa/preprocess.hpp"
#include "pabsa/providers.hpp"
#include "pabsa/random.hpp"
#include "pabsa/utf8.hpp"
