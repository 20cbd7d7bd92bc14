#pragma once

#include "tubal/algebra.hpp"
#include "tubal/bench.hpp"
#include "tubal/completion.hpp"
#include "tubal/cross.hpp"
#include "tubal/error.hpp"
#include "tubal/factorizations.hpp"
#include "tubal/fft.hpp"
#include "tubal/fourier.hpp"
#include "tubal/generators.hpp"
#include "tubal/image.hpp"
#include "tubal/io.hpp"
#include "tubal/linalg.hpp"
#include "tubal/parallel.hpp"
#include "tubal/random.hpp"
#include "tubal/tensor3.hpp"
