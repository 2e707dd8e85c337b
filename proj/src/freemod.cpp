#include "stabex/freemod.hpp"

#include <sstream>
#include <stdexcept>

namespace stabex {

namespace {

struct RankObj : ObjData {
  size_t rank;
  explicit RankObj(size_t r) : rank(r) {}
};

struct MatMor : MorData {
  Matrix m;
  explicit MatMor(Matrix mm) : m(std::move(mm)) {}
};

std::vector<uint32_t> primes_of(uint32_t n) {
  std::vector<uint32_t> ps;
  for (uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

size_t rank_mod_p(const Matrix& m, uint32_t p) {
  Matrix red(m.rows(), m.cols(), p);
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) red.at(r, c) = m.at(r, c) % p;
  return howell_form(red).pivot_cols.size();
}

}  // namespace

FreeModCategory::FreeModCategory(uint32_t n, std::optional<size_t> kernel_rank_cap)
    : ring_(n), kernel_rank_cap_(kernel_rank_cap), prime_divisors_(primes_of(n)) {}

std::string FreeModCategory::name() const {
  std::string s = "zmod:" + std::to_string(ring_.modulus);
  if (kernel_rank_cap_) s += "#cap" + std::to_string(*kernel_rank_cap_);
  return s;
}

Obj FreeModCategory::make_obj(size_t rank) const {
  return Obj{this, std::make_shared<RankObj>(rank)};
}

Mor FreeModCategory::make_mor(size_t dom_rank, size_t cod_rank, Matrix payload) const {
  if (payload.rows() != dom_rank || payload.cols() != cod_rank || payload.mod() != ring_.modulus)
    throw std::invalid_argument("FreeModCategory::make_mor: payload shape/modulus mismatch");
  return Mor{make_obj(dom_rank), make_obj(cod_rank), std::make_shared<MatMor>(std::move(payload))};
}

size_t FreeModCategory::rank_of(const Obj& a) {
  return static_cast<const RankObj&>(*a.data).rank;
}

const Matrix& FreeModCategory::payload(const Mor& m) {
  return static_cast<const MatMor&>(*m.data).m;
}

std::string FreeModCategory::obj_key(const Obj& a) const {
  return "R^" + std::to_string(rank_of(a));
}

std::string FreeModCategory::mor_iso_key(const Mor& m) const {
  if (!ring_.squarefree()) return mor_key(m);
  const Matrix& p = payload(m);
  std::ostringstream os;
  os << "iso:" << p.rows() << 'x' << p.cols();
  for (uint32_t q : prime_divisors_) os << ':' << q << '=' << rank_mod_p(p, q);
  return os.str();
}

Obj FreeModCategory::zero_obj() const { return make_obj(0); }

Mor FreeModCategory::identity(const Obj& a) const {
  size_t r = rank_of(a);
  return make_mor(r, r, Matrix::identity(r, ring_.modulus));
}

Mor FreeModCategory::zero_mor(const Obj& a, const Obj& b) const {
  return make_mor(rank_of(a), rank_of(b), Matrix::zero(rank_of(a), rank_of(b), ring_.modulus));
}

Mor FreeModCategory::compose(const Mor& g, const Mor& f) const {
  if (!obj_eq(f.cod, g.dom)) throw std::invalid_argument("compose: cod/dom mismatch");
  return make_mor(rank_of(f.dom), rank_of(g.cod), payload(f).mul(payload(g)));
}

Mor FreeModCategory::add(const Mor& f, const Mor& g) const {
  return make_mor(rank_of(f.dom), rank_of(f.cod), payload(f).add(payload(g)));
}

Mor FreeModCategory::negate(const Mor& f) const {
  return make_mor(rank_of(f.dom), rank_of(f.cod), payload(f).neg());
}

BiproductCert FreeModCategory::biproduct(const Obj& a, const Obj& b) const {
  size_t ra = rank_of(a), rb = rank_of(b);
  uint32_t n = ring_.modulus;
  Matrix ia = Matrix::identity(ra, n), ib = Matrix::identity(rb, n);
  BiproductCert bp;
  bp.sum = make_obj(ra + rb);
  bp.inj1 = make_mor(ra, ra + rb, ia.hstack(Matrix::zero(ra, rb, n)));
  bp.inj2 = make_mor(rb, ra + rb, Matrix::zero(rb, ra, n).hstack(ib));
  bp.proj1 = make_mor(ra + rb, ra, ia.vstack(Matrix::zero(rb, ra, n)));
  bp.proj2 = make_mor(ra + rb, rb, Matrix::zero(ra, rb, n).vstack(ib));
  return bp;
}

std::vector<Obj> FreeModCategory::objects(int bound) const {
  std::vector<Obj> out;
  for (int r = 0; r <= bound; ++r) out.push_back(make_obj(size_t(r)));
  return out;
}

std::vector<Mor> FreeModCategory::hom_generators(const Obj& a, const Obj& b) const {
  size_t ra = rank_of(a), rb = rank_of(b);
  std::vector<Mor> gens;
  for (size_t i = 0; i < ra; ++i)
    for (size_t j = 0; j < rb; ++j) {
      Matrix e(ra, rb, ring_.modulus);
      e.at(i, j) = 1;
      gens.push_back(make_mor(ra, rb, std::move(e)));
    }
  return gens;
}

std::vector<uint32_t> FreeModCategory::flatten(const Mor& m) const {
  return payload(m).data();
}

Mor FreeModCategory::unflatten(const Obj& a, const Obj& b, const std::vector<uint32_t>& coords) const {
  size_t ra = rank_of(a), rb = rank_of(b);
  Matrix m(ra, rb, ring_.modulus);
  for (size_t i = 0; i < ra * rb; ++i) m.at(i / rb, i % rb) = coords[i] % ring_.modulus;
  return make_mor(ra, rb, std::move(m));
}

size_t FreeModCategory::flat_len(const Obj& a, const Obj& b) const {
  return rank_of(a) * rank_of(b);
}

std::vector<Mor> FreeModCategory::enumerate_hom(const Obj& a, const Obj& b) const {
  size_t len = flat_len(a, b);
  uint32_t n = ring_.modulus;
  std::vector<Mor> out;
  std::vector<uint32_t> coords(len, 0);
  // Odometer in ascending lexicographic coordinate order.
  while (true) {
    out.push_back(unflatten(a, b, coords));
    size_t i = len;
    while (i > 0 && coords[i - 1] == n - 1) coords[--i] = 0;
    if (i == 0) break;
    ++coords[i - 1];
  }
  return out;
}

MorRule FreeModCategory::kernel_rule(const Mor& f) const {
  Matrix ns = left_nullspace(payload(f));
  auto basis = free_row_basis(ns);
  if (!basis)
    return {RuleVerdict::NotRepresentable, std::nullopt, "kernel module is not free"};
  if (kernel_rank_cap_ && basis->rows() > *kernel_rank_cap_)
    return {RuleVerdict::NotRepresentable, std::nullopt, "kernel rank exceeds instance cap"};
  return {RuleVerdict::Representable,
          make_mor(basis->rows(), rank_of(f.dom), std::move(*basis)), ""};
}

MorRule FreeModCategory::cokernel_rule(const Mor& f) const {
  auto proj = free_quotient_projection(payload(f));
  if (!proj)
    return {RuleVerdict::NotRepresentable, std::nullopt, "cokernel module is not free"};
  return {RuleVerdict::Representable,
          make_mor(rank_of(f.cod), proj->cols(), std::move(*proj)), ""};
}

std::optional<bool> FreeModCategory::is_kernel_rule(const Mor& f) const {
  const Matrix& m = payload(f);
  if (!left_nullspace(m).is_zero()) return false;  // not injective
  // Image must be closed: equal to the kernel of the maps annihilating it.
  Matrix ann = left_nullspace(m.transpose());
  Matrix closure = left_nullspace(ann.transpose());
  return row_module_eq(m, closure);
}

std::optional<bool> FreeModCategory::is_cokernel_rule(const Mor& f) const {
  // Surjections split (codomain free) and kernels of split surjections are
  // stably free, hence free over Z/n, so surjective <=> cokernel.
  return is_surjective_rows(payload(f));
}

}  // namespace stabex
