#pragma once

#include "pukit/common.hpp"
#include "pukit/corpus.hpp"
#include "pukit/features.hpp"
#include "pukit/lexstats.hpp"
#include "pukit/platt.hpp"
#include "pukit/pu_dataset.hpp"
#include "pukit/pulearn.hpp"
#include "pukit/report.hpp"
#include "pukit/svm.hpp"
