#pragma once

#include "wordseries/word.hpp"
#include "wordseries/coeff_map.hpp"
#include "wordseries/algebra.hpp"
#include "wordseries/frequency.hpp"
#include "wordseries/extended.hpp"
#include "wordseries/exppoly.hpp"
#include "wordseries/scheme.hpp"
#include "wordseries/coeffs.hpp"
#include "wordseries/transforms.hpp"
#include "wordseries/polynomial.hpp"
#include "wordseries/hamiltonian.hpp"
#include "wordseries/simulate.hpp"
#include "wordseries/linear_normal_form.hpp"
#include "wordseries/json_io.hpp"
