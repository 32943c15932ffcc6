#pragma once

#include "hyperseg/baselines.hpp"
#include "hyperseg/corpus_io.hpp"
#include "hyperseg/encoder.hpp"
#include "hyperseg/hypervector.hpp"
#include "hyperseg/metrics.hpp"
#include "hyperseg/segmenter.hpp"
#include "hyperseg/tokenizer.hpp"
