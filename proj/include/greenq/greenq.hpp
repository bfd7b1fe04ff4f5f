#pragma once

#include "greenq/deformation.hpp"
#include "greenq/gram.hpp"
#include "greenq/interpolation.hpp"
#include "greenq/io.hpp"
#include "greenq/jordan_wigner.hpp"
#include "greenq/oracle.hpp"
#include "greenq/parallel.hpp"
#include "greenq/permutation.hpp"
#include "greenq/spectral.hpp"
#include "greenq/word.hpp"
