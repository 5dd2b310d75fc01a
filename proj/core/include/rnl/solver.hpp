#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rnl/model.hpp"

namespace rnl {

// Overdetermined linear system A x = b. Unknowns are the position components
// followed by one offset-like nuisance (O or W).
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<std::string> unknown_labels;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

enum class LsMethod {
  kQr,               // column-pivoted Householder QR (default)
  kNormalEquations,  // literal (A^T A)^{-1} A^T b
};

// Rebuilds per-station ranges from one raw reference measurement plus the
// filtered differences:
//   out[ref] = raw_l_ref,  out[i] = raw_l_ref + delta(i, ref).
// Every channel then carries the single reference-channel measurement error,
// which the offset unknown absorbs during the solve.
std::vector<double> reconstruct_ranges_nonsym(double raw_l_ref, const DiffMatrix& filtered,
                                              int ref);

// Reference-station (non-symmetric) system, one row per station i != ref in
// ascending order:
//   (B_i - B_ref).M - (L_i - L_ref) O
//       = 1/2 ((|B_i|^2 - |B_ref|^2) - (L_i^2 - L_ref^2)).
// The L^2 difference is evaluated as (L_i - L_ref)(L_i + L_ref): same value,
// but no catastrophic cancellation when the clock offset dwarfs the ranges.
LinearSystem build_nonsym_system(const Layout& layout, std::span<const double> l_hat, int ref);

// Known (difference-only) part of (L_i + L_j)/2:
//   (1/(2n)) (sum_{k != i,j} delta(i,k) + sum_{k != i,j} delta(j,k)),
// so that (L_i + L_j)/2 = S/n + pair_sum_known_part(i,j) with S = sum_k L_k.
// Every other station contributes equally. Throws when i == j.
double pair_sum_known_part(const DiffMatrix& filtered, int i, int j);

// Symmetric system over all unordered pairs, rows in lexicographic (i, j)
// order with i < j:
//   (B_i - B_j).M - delta(i,j) W
//       = 1/2 (|B_i|^2 - |B_j|^2) - delta(i,j) pair_sum_known_part(i,j)
// with the combined nuisance W = O - S/n. O and S only ever appear in that
// combination, so folding them keeps the system full rank; from offset-free
// differences W always equals -mean_i ||M - B_i||.
LinearSystem build_sym_system(const Layout& layout, const DiffMatrix& filtered);

// Least squares minimizer of ||A x - b||. Throws RankDeficientError when
// sigma_min/sigma_max < kRankTolerance.
SolveResult solve_ls(const LinearSystem& sys, SolverVariant variant,
                     LsMethod method = LsMethod::kQr);

// sigma_max / sigma_min of A; +infinity when sigma_min vanishes at working
// precision (ratio below kRankTolerance), the same boundary solve_ls fails at.
double condition_number(const LinearSystem& sys);

// Reference index (0-based) minimizing the condition number of the
// non-symmetric system built from these differences; exact ties resolve to
// the lowest index. Throws RankDeficientError when every candidate is rank
// deficient.
int select_best_reference(const Layout& layout, const DiffMatrix& filtered);

// End-to-end solves used by the benchmark and the CLI. Both variants consume
// the same filtered difference matrix; the non-symmetric path also needs the
// raw reference measurement. Internally it anchors the reconstructed ranges
// at that measurement so the assembled numbers stay at range scale for
// arbitrarily large clock offsets; the reported nuisance is shifted back.
SolveResult solve_nonsym(const Layout& layout, double raw_l_ref, const DiffMatrix& filtered,
                         int ref, LsMethod method = LsMethod::kQr);
SolveResult solve_sym(const Layout& layout, const DiffMatrix& filtered,
                      LsMethod method = LsMethod::kQr);

}  // namespace rnl
