#include "stabex/howell.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace stabex {

namespace {

using Row = std::vector<uint32_t>;

Row scaled_sum(const Row& a, int64_t s, const Row& b, int64_t t, uint32_t n) {
  Row out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t v = (s * static_cast<int64_t>(a[i]) + t * static_cast<int64_t>(b[i])) % static_cast<int64_t>(n);
    if (v < 0) v += n;
    out[i] = static_cast<uint32_t>(v);
  }
  return out;
}

bool all_zero(const Row& r, size_t upto) {
  for (size_t i = 0; i < upto; ++i)
    if (r[i]) return false;
  return true;
}

/// Howell reduction over the first `cols` columns of augmented rows.
/// Returns placed pivot rows (echelon, canonical) and leaves in `work` only
/// rows whose first `cols` entries vanish.
struct RawHowell {
  std::vector<Row> placed;
  std::vector<size_t> pivot_cols;
  std::vector<uint32_t> pivot_leads;
  std::vector<Row> kernel_side;  // rows with zero matrix-part
};

RawHowell howell_raw(std::vector<Row> work, size_t cols, uint32_t n) {
  RawHowell out;
  for (size_t col = 0; col < cols; ++col) {
    // Combine all rows with a nonzero entry in this column into one pivot row.
    std::optional<Row> pivot;
    for (size_t i = 0; i < work.size();) {
      if (work[i][col] == 0) {
        ++i;
        continue;
      }
      if (!pivot) {
        pivot = std::move(work[i]);
        work.erase(work.begin() + i);
        continue;
      }
      int64_t a = (*pivot)[col], b = work[i][col];
      int64_t s, t;
      int64_t g = xgcd(a, b, s, t);
      Row np = scaled_sum(*pivot, s, work[i], t, n);
      Row ni = scaled_sum(*pivot, b / g, work[i], -(a / g), n);
      *pivot = std::move(np);
      work[i] = std::move(ni);  // entry at col is now 0
      ++i;
    }
    if (!pivot) continue;
    uint32_t u = unit_lift((*pivot)[col], n);
    Row p = scaled_sum(*pivot, u, *pivot, 0, n);
    uint32_t d = p[col];
    if (d != 1) {
      Row ann = scaled_sum(p, n / d, p, 0, n);  // zero at col and before
      bool nz = false;
      for (uint32_t x : ann) nz |= (x != 0);
      if (nz) work.push_back(std::move(ann));
    }
    out.pivot_cols.push_back(col);
    out.pivot_leads.push_back(d);
    out.placed.push_back(std::move(p));
  }
  // Reduce entries above each pivot into [0, lead).
  for (size_t j = 0; j < out.placed.size(); ++j) {
    size_t cj = out.pivot_cols[j];
    uint32_t dj = out.pivot_leads[j];
    for (size_t i = 0; i < j; ++i) {
      uint32_t e = out.placed[i][cj];
      uint32_t q = e / dj;
      if (q) out.placed[i] = scaled_sum(out.placed[i], 1, out.placed[j], -static_cast<int64_t>(q), n);
    }
  }
  for (auto& r : work) {
    if (!all_zero(r, r.size())) out.kernel_side.push_back(std::move(r));
  }
  return out;
}

std::vector<Row> augmented_rows(const Matrix& m) {
  std::vector<Row> rows;
  rows.reserve(m.rows());
  for (size_t i = 0; i < m.rows(); ++i) {
    Row r(m.cols() + m.rows(), 0);
    for (size_t j = 0; j < m.cols(); ++j) r[j] = m.at(i, j);
    r[m.cols() + i] = 1 % m.mod();
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix rows_to_matrix(const std::vector<Row>& rows, size_t c0, size_t c1, uint32_t n) {
  Matrix out(rows.size(), c1 - c0, n);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = c0; j < c1; ++j) out.at(i, j - c0) = rows[i][j];
  return out;
}

}  // namespace

HowellForm howell_form(const Matrix& m) {
  auto raw = howell_raw(augmented_rows(m), m.cols(), m.mod());
  HowellForm h;
  h.form = rows_to_matrix(raw.placed, 0, m.cols(), m.mod());
  h.transform = rows_to_matrix(raw.placed, m.cols(), m.cols() + m.rows(), m.mod());
  h.pivot_cols = raw.pivot_cols;
  h.pivot_leads = raw.pivot_leads;
  return h;
}

bool row_module_eq(const Matrix& a, const Matrix& b) {
  return howell_form(a).form == howell_form(b).form;
}

bool row_module_contains(const HowellForm& h, const std::vector<uint32_t>& v,
                         std::vector<uint32_t>* coeffs) {
  uint32_t n = h.form.mod();
  if (v.size() != h.form.cols()) throw std::invalid_argument("row_module_contains: width mismatch");
  Row r = v;
  if (coeffs) coeffs->assign(h.transform.cols(), 0);
  for (size_t j = 0; j < h.pivot_cols.size(); ++j) {
    size_t cj = h.pivot_cols[j];
    uint32_t dj = h.pivot_leads[j];
    uint32_t e = r[cj];
    if (e % dj != 0) return false;
    uint32_t q = e / dj;
    if (!q) continue;
    for (size_t c = 0; c < r.size(); ++c)
      r[c] = static_cast<uint32_t>((r[c] + static_cast<uint64_t>(q) * (n - h.form.at(j, c))) % n);
    if (coeffs)
      for (size_t c = 0; c < coeffs->size(); ++c)
        (*coeffs)[c] =
            static_cast<uint32_t>(((*coeffs)[c] + static_cast<uint64_t>(q) * h.transform.at(j, c)) % n);
  }
  for (uint32_t x : r)
    if (x) return false;
  return true;
}

bool row_module_contains_all(const HowellForm& h, const Matrix& sub) {
  for (size_t i = 0; i < sub.rows(); ++i)
    if (!row_module_contains(h, sub.row(i))) return false;
  return true;
}

Matrix left_nullspace(const Matrix& m) {
  auto raw = howell_raw(augmented_rows(m), m.cols(), m.mod());
  Matrix gens = rows_to_matrix(raw.kernel_side, m.cols(), m.cols() + m.rows(), m.mod());
  return howell_form(gens).form;  // canonical generators
}

std::optional<std::vector<uint32_t>> solve_left(const Matrix& m, const std::vector<uint32_t>& b) {
  if (b.size() != m.cols()) throw std::invalid_argument("solve_left: width mismatch");
  HowellForm h = howell_form(m);
  std::vector<uint32_t> coeffs;
  if (!row_module_contains(h, b, &coeffs)) return std::nullopt;
  return coeffs;
}

bool is_surjective_rows(const Matrix& m) {
  HowellForm h = howell_form(m);
  if (h.pivot_cols.size() != m.cols()) return false;
  for (uint32_t d : h.pivot_leads)
    if (d != 1) return false;
  return true;
}

namespace {

void snf_col_op_track(std::vector<std::vector<int64_t>>& v, std::vector<std::vector<int64_t>>& vinv,
                      size_t c, size_t j, int64_t q, size_t dim) {
  // col_j += q * col_c on the working matrix corresponds to V <- V * R,
  // Vinv <- R^{-1} * Vinv with R = I + q E_{c,j}.
  for (size_t r = 0; r < dim; ++r) v[r][j] += q * v[r][c];
  for (size_t cc = 0; cc < dim; ++cc) vinv[c][cc] -= q * vinv[j][cc];
}

}  // namespace

SmithForm smith_form(std::vector<std::vector<int64_t>> a, size_t rows, size_t cols) {
  SmithForm out;
  out.V.assign(cols, std::vector<int64_t>(cols, 0));
  out.Vinv.assign(cols, std::vector<int64_t>(cols, 0));
  auto& v = out.V;
  auto& vinv = out.Vinv;
  for (size_t i = 0; i < cols; ++i) v[i][i] = vinv[i][i] = 1;

  size_t t = 0;
  const size_t lim = std::min(rows, cols);
  while (t < lim) {
    // Find a nonzero pivot in the remaining block.
    size_t pr = rows, pc = cols;
    int64_t best = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        int64_t x = a[i][j] >= 0 ? a[i][j] : -a[i][j];
        if (x != 0 && (best == 0 || x < best)) {
          best = x;
          pr = i;
          pc = j;
        }
      }
    if (best == 0) break;
    std::swap(a[t], a[pr]);
    if (pc != t) {
      for (size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pc]);
      for (size_t r = 0; r < cols; ++r) std::swap(v[r][t], v[r][pc]);
      std::swap(vinv[t], vinv[pc]);
    }
    bool clean = true;
    // Clear column t.
    for (size_t i = t + 1; i < rows; ++i) {
      if (a[i][t] == 0) continue;
      int64_t q = a[i][t] / a[t][t];
      for (size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
      if (a[i][t] != 0) clean = false;
    }
    // Clear row t.
    for (size_t j = t + 1; j < cols; ++j) {
      if (a[t][j] == 0) continue;
      int64_t q = a[t][j] / a[t][t];
      for (size_t i = 0; i < rows; ++i) a[i][j] -= q * a[i][t];
      snf_col_op_track(v, vinv, t, j, -q, cols);
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // remainders left; redo with smaller pivot
    // Divisibility: pivot must divide everything below-right.
    bool div_ok = true;
    for (size_t i = t + 1; i < rows && div_ok; ++i)
      for (size_t j = t + 1; j < cols && div_ok; ++j)
        if (a[i][j] % a[t][t] != 0) {
          // Fold offending column into column t and restart this step.
          for (size_t r = 0; r < rows; ++r) a[r][t] += a[r][j];
          snf_col_op_track(v, vinv, j, t, 1, cols);
          div_ok = false;
        }
    if (!div_ok) continue;
    if (a[t][t] < 0) {
      for (size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
    }
    ++t;
  }
  out.diag.assign(lim, 0);
  for (size_t i = 0; i < t; ++i) out.diag[i] = a[i][i];
  return out;
}

namespace {

/// SNF of the integer matrix [m ; n*I_cols]; diag has length cols.
SmithForm presentation_snf(const Matrix& m) {
  size_t rows = m.rows() + m.cols(), cols = m.cols();
  std::vector<std::vector<int64_t>> a(rows, std::vector<int64_t>(cols, 0));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < cols; ++j) a[i][j] = m.at(i, j);
  for (size_t j = 0; j < cols; ++j) a[m.rows() + j][j] = m.mod();
  return smith_form(std::move(a), rows, cols);
}

}  // namespace

std::vector<uint32_t> module_invariants(const Matrix& m) {
  uint32_t n = m.mod();
  SmithForm s = presentation_snf(m);
  std::vector<uint32_t> out;
  for (int64_t d : s.diag) {
    if (d == 1) continue;
    out.push_back(static_cast<uint32_t>(d % n));  // 0 means free factor
  }
  std::sort(out.begin(), out.end(), [](uint32_t a, uint32_t b) {
    if (a == 0) return false;
    if (b == 0) return true;
    return a < b;
  });
  return out;
}

std::optional<Matrix> free_row_basis(const Matrix& g) {
  uint32_t n = g.mod();
  Matrix rel = left_nullspace(g);
  // g has k generator rows; module = R^k / rowspan(rel).
  size_t k = g.rows();
  if (k == 0) return Matrix(0, g.cols(), n);
  std::vector<std::vector<int64_t>> a(rel.rows() + k, std::vector<int64_t>(k, 0));
  for (size_t i = 0; i < rel.rows(); ++i)
    for (size_t j = 0; j < k; ++j) a[i][j] = rel.at(i, j);
  for (size_t j = 0; j < k; ++j) a[rel.rows() + j][j] = n;
  SmithForm s = smith_form(std::move(a), rel.rows() + k, k);
  std::vector<size_t> free_idx;
  for (size_t i = 0; i < s.diag.size(); ++i) {
    int64_t d = s.diag[i];
    if (d == 1) continue;
    if (d % n == 0)
      free_idx.push_back(i);
    else
      return std::nullopt;
  }
  // Coefficient vector of free factor i is row i of V^{-1} (stored in U).
  Matrix coeff(free_idx.size(), k, n);
  RingSpec ring(n);
  for (size_t r = 0; r < free_idx.size(); ++r)
    for (size_t j = 0; j < k; ++j) coeff.at(r, j) = ring.reduce(s.Vinv[free_idx[r]][j]);
  return coeff.mul(g);
}

std::optional<Matrix> free_quotient_projection(const Matrix& f) {
  uint32_t n = f.mod();
  SmithForm s = presentation_snf(f);
  std::vector<size_t> free_idx;
  for (size_t i = 0; i < s.diag.size(); ++i) {
    int64_t d = s.diag[i];
    if (d == 1) continue;
    if (d % n == 0)
      free_idx.push_back(i);
    else
      return std::nullopt;
  }
  Matrix p(f.cols(), free_idx.size(), n);
  RingSpec ring(n);
  for (size_t r = 0; r < f.cols(); ++r)
    for (size_t c = 0; c < free_idx.size(); ++c) p.at(r, c) = ring.reduce(s.V[r][free_idx[c]]);
  return p;
}

std::vector<std::vector<uint32_t>> enumerate_row_module(const Matrix& g) {
  uint32_t n = g.mod();
  std::set<std::vector<uint32_t>> elems;
  elems.insert(std::vector<uint32_t>(g.cols(), 0));
  for (size_t i = 0; i < g.rows(); ++i) {
    std::set<std::vector<uint32_t>> next;
    for (const auto& s : elems)
      for (uint32_t c = 0; c < n; ++c) {
        std::vector<uint32_t> v(s);
        for (size_t j = 0; j < g.cols(); ++j)
          v[j] = static_cast<uint32_t>((v[j] + static_cast<uint64_t>(c) * g.at(i, j)) % n);
        next.insert(std::move(v));
      }
    elems = std::move(next);
  }
  return std::vector<std::vector<uint32_t>>(elems.begin(), elems.end());
}

}  // namespace stabex
