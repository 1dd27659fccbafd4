#pragma once

// Umbrella header: pulls in every public module.

#include "lrsp/error.hpp"
#include "lrsp/util/io.hpp"
#include "lrsp/util/rng.hpp"
#include "lrsp/util/text.hpp"

#include "lrsp/lf/anonymize.hpp"
#include "lrsp/lf/decompose.hpp"
#include "lrsp/lf/logical_form.hpp"
#include "lrsp/lf/normalize.hpp"
#include "lrsp/lf/smatch.hpp"

#include "lrsp/data/example.hpp"

#include "lrsp/scfg/binding.hpp"
#include "lrsp/scfg/dataset.hpp"
#include "lrsp/scfg/derive.hpp"
#include "lrsp/scfg/grammar.hpp"

#include "lrsp/features/density.hpp"
#include "lrsp/features/kmeans.hpp"
#include "lrsp/features/kmedoids.hpp"
#include "lrsp/features/tfidf.hpp"
#include "lrsp/features/vectors.hpp"

#include "lrsp/acquisition/abe.hpp"
#include "lrsp/acquisition/baselines.hpp"
#include "lrsp/acquisition/csse.hpp"
#include "lrsp/acquisition/lfs_lc_d.hpp"
#include "lrsp/acquisition/quantile.hpp"
#include "lrsp/acquisition/score_table.hpp"
#include "lrsp/acquisition/selection.hpp"
#include "lrsp/acquisition/translation_model.hpp"
#include "lrsp/acquisition/uncertainty.hpp"

#include "lrsp/memory/baselines.hpp"
#include "lrsp/memory/buffer.hpp"
#include "lrsp/memory/dlfs.hpp"

#include "lrsp/metrics/diversity.hpp"
#include "lrsp/metrics/match.hpp"
#include "lrsp/metrics/sql.hpp"

#include "lrsp/harness/alignment.hpp"
#include "lrsp/harness/config.hpp"
#include "lrsp/harness/paraphrase.hpp"
#include "lrsp/harness/select.hpp"
#include "lrsp/harness/simulate.hpp"
