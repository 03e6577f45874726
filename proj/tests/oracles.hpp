// Independent reference implementations used to check the library. These
// deliberately avoid the production code paths: spans are re-extracted
// with string matching, CSLS is evaluated pairwise from the defining
// formula, Viterbi is exhaustive enumeration, and gradients come from
// central finite differences.
#ifndef XLNER_TEST_ORACLES_HPP
#define XLNER_TEST_ORACLES_HPP

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "xlner/corpus.hpp"
#include "xlner/tagger.hpp"

namespace xlner::oracle {

// Reference span extractor driven by the label strings themselves.
std::vector<EntitySpan> extract_spans_reference(const std::vector<std::string>& labels);

// BIO validity from the label strings.
bool valid_bio_reference(const std::vector<std::string>& labels);

// Frobenius objective ||P S - T||_F evaluated directly.
double procrustes_objective(const Eigen::MatrixXd& p, const Eigen::MatrixXd& source_cols,
                            const Eigen::MatrixXd& target_cols);

// Optimal objective value by the algebraic identity
// ||PS - T||_F^2 = ||S||^2 + ||T||^2 - 2 * nuclear_norm(T S^T).
double procrustes_optimal_objective(const Eigen::MatrixXd& source_cols,
                                    const Eigen::MatrixXd& target_cols);

// Direct minimizer for d = 2: scans rotation angle (both orientation
// branches) and refines around the best sample.
Eigen::Matrix2d procrustes_best_2d(const Eigen::MatrixXd& source_cols,
                                   const Eigen::MatrixXd& target_cols);

// Random orthogonal matrix by Gram-Schmidt of Gaussian columns.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng);

// Pairwise evaluation of the CSLS retrieval score and its penalties.
struct CslsReference {
  Eigen::MatrixXd score;   // V_s x V_t
  Eigen::VectorXd r_source;
  Eigen::VectorXd r_target;
};
CslsReference csls_reference(const Eigen::MatrixXd& mapped_source_rows,
                             const Eigen::MatrixXd& target_rows, int k);
// Argmax over the score row with ties toward the lower target index.
int csls_best_target(const CslsReference& reference, int source_index);

// Exhaustive search over all BIO-valid label sequences.
std::vector<int> viterbi_exhaustive(const Eigen::MatrixXd& probabilities,
                                    const LabelSet& label_set);
double sequence_log_score(const Eigen::MatrixXd& probabilities, const std::vector<int>& labels);

// All parameter entries of a model, in a fixed order.
std::vector<double*> parameter_slots(TaggerModel& model);

// Central finite differences of an arbitrary scalar loss over every
// parameter of the model.
std::vector<double> finite_difference_gradient(TaggerModel& model,
                                               const std::function<double()>& loss,
                                               double step = 1e-5);

// Largest relative error between two gradient vectors, with a floor that
// keeps near-zero entries meaningful.
double max_relative_error(const std::vector<double>& a, const std::vector<double>& b,
                          double floor = 1e-6);

}  // namespace xlner::oracle

#endif  // XLNER_TEST_ORACLES_HPP
