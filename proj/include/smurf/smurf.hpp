#pragma once

#include "smurf/error.hpp"
#include "smurf/fusion.hpp"
#include "smurf/harness/correlation.hpp"
#include "smurf/harness/degrade.hpp"
#include "smurf/harness/ellipse.hpp"
#include "smurf/harness/failure.hpp"
#include "smurf/harness/pairwise.hpp"
#include "smurf/harness/system.hpp"
#include "smurf/io/records.hpp"
#include "smurf/mima.hpp"
#include "smurf/runtime/attention.hpp"
#include "smurf/runtime/bundle.hpp"
#include "smurf/runtime/fixture.hpp"
#include "smurf/sparcs.hpp"
#include "smurf/text/porter_stemmer.hpp"
#include "smurf/text/preprocess.hpp"
#include "smurf/text/stopwords.hpp"
