#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "embsvm/corpus.hpp"
#include "embsvm/rng.hpp"
#include "embsvm/sparse.hpp"

// Reference implementations used only by tests. They favor the most direct
// formulation over speed and share no code with the library.
namespace embsvm::oracle {

/// tf-idf of one document recomputed from raw counts over the fitting corpus.
std::map<std::string, double> tfidf(const Corpus& fit, const std::vector<std::string>& doc,
                                    bool normalize);

struct SvmSolution {
  std::vector<double> w;
  double b = 0.0;
  double objective = 0.0;
};

/// lambda/2 |w|^2 + mean hinge, evaluated on dense rows.
double svm_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                     const std::vector<double>& w, double b, double lambda);

/// Exact small-scale solution: SMO on the explicit Gram matrix, selecting the
/// maximal violating pair until the KKT gap is below 1e-12, then the bias by
/// trying every hinge breakpoint.
SvmSolution exact_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      double lambda, bool fit_bias);

/// Two-sided tail probability of Student's t by composite Simpson quadrature
/// of the density.
double t_two_sided_p(double t, double dof);

/// Random corpus over a vocabulary of tokens "w0".."w<vocab-1>" with skewed
/// token frequencies. Documents may be empty.
Corpus random_corpus(Rng& rng, std::size_t n_docs, std::size_t vocab, std::size_t max_len);

/// Two Gaussian blobs (label +1 around +shift, -1 around -shift), possibly
/// overlapping.
struct BinaryProblem {
  std::vector<std::vector<double>> dense;
  std::vector<SparseVector> sparse;
  std::vector<int> y;
  std::vector<std::int8_t> y8;
};
BinaryProblem random_binary_problem(Rng& rng, std::size_t n, std::size_t dim, double shift);

}  // namespace embsvm::oracle
