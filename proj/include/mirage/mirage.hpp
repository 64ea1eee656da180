#pragma once

// Umbrella header.

#include "mirage/agreement.hpp"
#include "mirage/backends.hpp"
#include "mirage/baselines.hpp"
#include "mirage/cache.hpp"
#include "mirage/corpus.hpp"
#include "mirage/decompose.hpp"
#include "mirage/embedding.hpp"
#include "mirage/errors.hpp"
#include "mirage/judge.hpp"
#include "mirage/judgments.hpp"
#include "mirage/json_io.hpp"
#include "mirage/maps.hpp"
#include "mirage/metric_score.hpp"
#include "mirage/mirage_metrics.hpp"
#include "mirage/prompts.hpp"
#include "mirage/remote.hpp"
#include "mirage/report.hpp"
#include "mirage/run_config.hpp"
#include "mirage/runner.hpp"
#include "mirage/segment.hpp"
#include "mirage/text.hpp"
#include "mirage/textrag_metrics.hpp"
#include "mirage/types.hpp"
#include "mirage/validate.hpp"
