#pragma once

#include "kgcg/adapter.hpp"
#include "kgcg/dump.hpp"
#include "kgcg/error.hpp"
#include "kgcg/instance_stats.hpp"
#include "kgcg/intern.hpp"
#include "kgcg/metrics.hpp"
#include "kgcg/ntriples.hpp"
#include "kgcg/ontology.hpp"
#include "kgcg/pipeline.hpp"
#include "kgcg/ratio.hpp"
#include "kgcg/report.hpp"
#include "kgcg/term.hpp"
#include "kgcg/vocab.hpp"
