#pragma once

#include <optional>
#include <vector>

#include "stabex/matrix.hpp"

namespace stabex {

/// Canonical Howell normal form of the row module of a matrix over Z/n,
/// with the transform rows expressing the form in terms of the input rows.
struct HowellForm {
  Matrix form;       // canonical; zero rows dropped
  Matrix transform;  // transform * input == form (row-wise combinations)
  std::vector<size_t> pivot_cols;
  std::vector<uint32_t> pivot_leads;  // leading entries, divisors of n
};

HowellForm howell_form(const Matrix& m);

/// Row modules are equal iff the Howell forms coincide.
bool row_module_eq(const Matrix& a, const Matrix& b);

/// Membership of a row vector in the row module described by a Howell form.
/// When coeffs is non-null and h carries a transform, *coeffs receives a
/// combination of the ORIGINAL generator rows producing v.
bool row_module_contains(const HowellForm& h, const std::vector<uint32_t>& v,
                         std::vector<uint32_t>* coeffs = nullptr);

/// Every row of sub lies in the row module of h.
bool row_module_contains_all(const HowellForm& h, const Matrix& sub);

/// Generators of the left kernel {x in R^rows : x * m == 0}, canonical rows.
Matrix left_nullspace(const Matrix& m);

/// One solution of x * m == b (row convention), if any.
std::optional<std::vector<uint32_t>> solve_left(const Matrix& m, const std::vector<uint32_t>& b);

/// x * m surjective onto R^cols?
bool is_surjective_rows(const Matrix& m);

/// Smith normal form over Z: U * A * V == diag(d) for unimodular U, V. Only
/// the column transform V (c x c) and its inverse are tracked; row transforms
/// are not needed by any caller.
struct SmithForm {
  std::vector<int64_t> diag;  // length min(r, c), divisibility chain
  std::vector<std::vector<int64_t>> V, Vinv;
};
SmithForm smith_form(std::vector<std::vector<int64_t>> a, size_t rows, size_t cols);

/// Cyclic decomposition of the module R^cols / rowspan(m): annihilator of each
/// nontrivial factor, reduced mod n (0 = free factor). Sorted ascending with 0 last.
std::vector<uint32_t> module_invariants(const Matrix& m);

/// If the row module of g is a free R-module, a matrix whose rows form a free
/// basis of it; otherwise nullopt.
std::optional<Matrix> free_row_basis(const Matrix& g);

/// If R^cols / rowspan(f) is free of rank q, a cols x q matrix p with f*p == 0
/// presenting the quotient projection; otherwise nullopt.
std::optional<Matrix> free_quotient_projection(const Matrix& f);

/// All elements of the row module spanned by the rows of g (brute-force
/// closure; test oracle at desk scale). Deterministic order.
std::vector<std::vector<uint32_t>> enumerate_row_module(const Matrix& g);

}  // namespace stabex
