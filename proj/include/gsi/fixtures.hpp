// The two isospectral 6-vertex graphs whose interior spectral data coincide
// on B = {v1, v2}, with their exact eigendata, and the verification
// procedure for both the spectral and the random-walk statements.
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gsi/graph.hpp"

namespace gsi {

struct AppendixPair {
  WeightedGraph left;   // has a degree-4 vertex
  WeightedGraph right;  // has a degree-1 vertex
  VertexSubset B;       // {0, 1} on both graphs
  Eigen::VectorXd exactEigenvalues;  // ascending
  // Per distinct eigenvalue: the exact Gram matrix of the eigenspace
  // restricted to B (values from the orthonormalized eigenbasis).
  std::vector<std::pair<double, Eigen::Matrix2d>> exactGramOnB;
};

/// The pair with weights mu = C, g = 1. Eigenvalues scale by 1/C and Gram
/// matrices by 1/C relative to the combinatorial case C = 1.
AppendixPair appendix_pair(double C = 1.0);

struct IsospectralReport {
  double C = 1.0;
  bool spectralEqual = false;    // data coincide on B at 1e-10
  double maxEigenvalueError = 0; // computed vs exact closed forms
  double maxGramError = 0;       // computed vs exact Gram blocks
  bool walkChecked = false;      // part (2) runs only for C >= 4
  double maxWalkDifference = 0;  // max over y,z in B, t <= walkHorizon
  int walkHorizon = 50;
};

/// Part (1) for any C > 0: both graphs carry identical interior spectral
/// data on B. Part (2) for C >= 4: the observed walk probabilities
/// P(H_t^y = z) coincide for y,z in B. Throws if C <= 0, or if the walk
/// part is requested with C < 4 (the walk is undefined at the degree-4
/// vertex there).
IsospectralReport verify_isospectral_pair(double C, bool requireWalk = false);

}  // namespace gsi
