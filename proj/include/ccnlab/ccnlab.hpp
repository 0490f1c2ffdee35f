#pragma once

#include "ccnlab/ccn/g_loss.hpp"
#include "ccnlab/ccn/inference.hpp"
#include "ccnlab/ccn/model.hpp"
#include "ccnlab/ccn/train.hpp"
#include "ccnlab/core/dataset.hpp"
#include "ccnlab/core/error.hpp"
#include "ccnlab/core/log.hpp"
#include "ccnlab/core/rng.hpp"
#include "ccnlab/fccn/heads.hpp"
#include "ccnlab/fccn/losses.hpp"
#include "ccnlab/fccn/train.hpp"
#include "ccnlab/harness/config.hpp"
#include "ccnlab/harness/experiment.hpp"
#include "ccnlab/harness/model_io.hpp"
#include "ccnlab/harness/pool.hpp"
#include "ccnlab/metrics/metrics.hpp"
#include "ccnlab/metrics/utility.hpp"
#include "ccnlab/nn/activation.hpp"
#include "ccnlab/nn/adam.hpp"
#include "ccnlab/nn/dense_net.hpp"
#include "ccnlab/nn/monotone_net.hpp"
#include "ccnlab/nn/serialize.hpp"
#include "ccnlab/scenarios/generators.hpp"
#include "ccnlab/scenarios/io.hpp"
#include "ccnlab/scenarios/oracle.hpp"
