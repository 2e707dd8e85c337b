#include "stabex/pairs.hpp"

#include <sstream>
#include <stdexcept>

namespace stabex {

namespace {

struct PairObj : ObjData {
  size_t ambient;
  Matrix sub;  // canonical RREF, full row rank, sub.cols() == ambient
  PairObj(size_t v, Matrix w) : ambient(v), sub(std::move(w)) {}
};

struct MatMor : MorData {
  Matrix m;
  explicit MatMor(Matrix mm) : m(std::move(mm)) {}
};

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

PairCategory::PairCategory(uint32_t p) : ring_(p) {
  if (!is_prime(p)) throw std::invalid_argument("PairCategory: modulus must be prime");
}

std::string PairCategory::name() const { return "pairs:" + std::to_string(ring_.modulus); }

Obj PairCategory::make_obj(size_t ambient, const Matrix& sub_gens) const {
  if (sub_gens.cols() != ambient || sub_gens.mod() != ring_.modulus)
    throw std::invalid_argument("PairCategory::make_obj: bad subspace generators");
  Matrix canon = howell_form(sub_gens).form;  // over F_p this is the RREF basis
  return Obj{this, std::make_shared<PairObj>(ambient, std::move(canon))};
}

Obj PairCategory::make_obj(size_t ambient) const {
  return make_obj(ambient, Matrix::zero(0, ambient, ring_.modulus));
}

Mor PairCategory::make_mor(const Obj& dom, const Obj& cod, Matrix payload) const {
  if (payload.rows() != ambient_of(dom) || payload.cols() != ambient_of(cod) ||
      payload.mod() != ring_.modulus)
    throw std::invalid_argument("PairCategory::make_mor: payload shape/modulus mismatch");
  Matrix image = sub_of(dom).mul(payload);
  HowellForm cod_sub = howell_form(sub_of(cod));
  if (!row_module_contains_all(cod_sub, image))
    throw std::invalid_argument("PairCategory::make_mor: payload does not preserve subspaces");
  return Mor{dom, cod, std::make_shared<MatMor>(std::move(payload))};
}

size_t PairCategory::ambient_of(const Obj& a) {
  return static_cast<const PairObj&>(*a.data).ambient;
}
const Matrix& PairCategory::sub_of(const Obj& a) {
  return static_cast<const PairObj&>(*a.data).sub;
}
const Matrix& PairCategory::payload(const Mor& m) {
  return static_cast<const MatMor&>(*m.data).m;
}

std::string PairCategory::obj_key(const Obj& a) const {
  return "P(" + std::to_string(ambient_of(a)) + "|" + sub_of(a).key() + ")";
}

Obj PairCategory::zero_obj() const { return make_obj(0); }

Mor PairCategory::identity(const Obj& a) const {
  return make_mor(a, a, Matrix::identity(ambient_of(a), ring_.modulus));
}

Mor PairCategory::zero_mor(const Obj& a, const Obj& b) const {
  return make_mor(a, b, Matrix::zero(ambient_of(a), ambient_of(b), ring_.modulus));
}

Mor PairCategory::compose(const Mor& g, const Mor& f) const {
  if (!obj_eq(f.cod, g.dom)) throw std::invalid_argument("compose: cod/dom mismatch");
  return make_mor(f.dom, g.cod, payload(f).mul(payload(g)));
}

Mor PairCategory::add(const Mor& f, const Mor& g) const {
  return make_mor(f.dom, f.cod, payload(f).add(payload(g)));
}

Mor PairCategory::negate(const Mor& f) const {
  return make_mor(f.dom, f.cod, payload(f).neg());
}

BiproductCert PairCategory::biproduct(const Obj& a, const Obj& b) const {
  size_t va = ambient_of(a), vb = ambient_of(b);
  uint32_t p = ring_.modulus;
  Obj sum = make_obj(va + vb, Matrix::block_diag(sub_of(a), sub_of(b)));
  Matrix ia = Matrix::identity(va, p), ib = Matrix::identity(vb, p);
  BiproductCert bp;
  bp.sum = sum;
  bp.inj1 = make_mor(a, sum, ia.hstack(Matrix::zero(va, vb, p)));
  bp.inj2 = make_mor(b, sum, Matrix::zero(vb, va, p).hstack(ib));
  bp.proj1 = make_mor(sum, a, ia.vstack(Matrix::zero(vb, va, p)));
  bp.proj2 = make_mor(sum, b, Matrix::zero(va, vb, p).vstack(ib));
  return bp;
}

std::vector<Obj> PairCategory::objects(int bound) const {
  // Ambient dimension ascending; subspaces by dimension, then pivot columns,
  // then free entries, enumerating reduced echelon bases directly.
  std::vector<Obj> out;
  uint32_t p = ring_.modulus;
  for (int v = 0; v <= bound; ++v) {
    for (int w = 0; w <= v; ++w) {
      // Choose pivot columns as a strictly increasing w-subset of [0, v).
      std::vector<size_t> piv(w);
      for (int i = 0; i < w; ++i) piv[i] = size_t(i);
      while (true) {
        std::vector<std::pair<size_t, size_t>> slots;  // free entry positions
        for (int r = 0; r < w; ++r)
          for (size_t c = piv[r] + 1; c < size_t(v); ++c) {
            bool is_piv = false;
            for (size_t pc : piv)
              if (pc == c) is_piv = true;
            if (!is_piv) slots.emplace_back(size_t(r), c);
          }
        std::vector<uint32_t> vals(slots.size(), 0);
        while (true) {
          Matrix m(w, v, p);
          for (int r = 0; r < w; ++r) m.at(r, piv[r]) = 1;
          for (size_t s = 0; s < slots.size(); ++s) m.at(slots[s].first, slots[s].second) = vals[s];
          out.push_back(Obj{this, std::make_shared<PairObj>(size_t(v), std::move(m))});
          size_t i = vals.size();
          while (i > 0 && vals[i - 1] == p - 1) vals[--i] = 0;
          if (i == 0) break;
          ++vals[i - 1];
        }
        // Next pivot-column subset in lexicographic order.
        int i = w - 1;
        while (i >= 0 && piv[i] == size_t(v - w + i)) --i;
        if (i < 0) break;
        ++piv[i];
        for (int j = i + 1; j < w; ++j) piv[j] = piv[j - 1] + 1;
      }
    }
  }
  return out;
}

std::vector<Mor> PairCategory::hom_generators(const Obj& a, const Obj& b) const {
  size_t va = ambient_of(a), vb = ambient_of(b);
  uint32_t p = ring_.modulus;
  if (va == 0 || vb == 0) return {};
  const Matrix& wa = sub_of(a);
  Matrix c = right_null_cols(sub_of(b), vb);  // vb x (vb - wb)
  if (wa.rows() == 0 || c.cols() == 0) {
    // No constraint: elementary matrices generate.
    std::vector<Mor> gens;
    for (size_t i = 0; i < va; ++i)
      for (size_t j = 0; j < vb; ++j) {
        Matrix e(va, vb, p);
        e.at(i, j) = 1;
        gens.push_back(make_mor(a, b, std::move(e)));
      }
    return gens;
  }
  // Constraint wa * F * c == 0, linear in the va*vb entries of F:
  // coefficient of F(i,j) in output slot (k,l) is wa(k,i) * c(j,l).
  size_t nvar = va * vb, nout = wa.rows() * c.cols();
  Matrix sys(nvar, nout, p);
  for (size_t i = 0; i < va; ++i)
    for (size_t j = 0; j < vb; ++j)
      for (size_t k = 0; k < wa.rows(); ++k)
        for (size_t l = 0; l < c.cols(); ++l)
          sys.at(i * vb + j, k * c.cols() + l) = ring_.mul(wa.at(k, i), c.at(j, l));
  Matrix sol = left_nullspace(sys);  // rows are flattened payloads
  std::vector<Mor> gens;
  for (size_t r = 0; r < sol.rows(); ++r) {
    Matrix m(va, vb, p);
    for (size_t i = 0; i < va; ++i)
      for (size_t j = 0; j < vb; ++j) m.at(i, j) = sol.at(r, i * vb + j);
    gens.push_back(make_mor(a, b, std::move(m)));
  }
  return gens;
}

std::vector<uint32_t> PairCategory::flatten(const Mor& m) const { return payload(m).data(); }

Mor PairCategory::unflatten(const Obj& a, const Obj& b, const std::vector<uint32_t>& coords) const {
  size_t va = ambient_of(a), vb = ambient_of(b);
  Matrix m(va, vb, ring_.modulus);
  for (size_t i = 0; i < va * vb; ++i) m.at(i / vb, i % vb) = coords[i] % ring_.modulus;
  return make_mor(a, b, std::move(m));
}

size_t PairCategory::flat_len(const Obj& a, const Obj& b) const {
  return ambient_of(a) * ambient_of(b);
}

Matrix PairCategory::right_null_cols(const Matrix& w, size_t ambient) const {
  if (w.rows() == 0) return Matrix::identity(ambient, ring_.modulus);
  return left_nullspace(w.transpose()).transpose();
}

MorRule PairCategory::kernel_rule(const Mor& f) const {
  const Matrix& m = payload(f);
  Matrix k = left_nullspace(m);  // basis of the ambient kernel, k x va
  // Domain-subspace membership transported along the kernel basis:
  // y is in the kernel subspace iff y*k lies in the domain subspace.
  Matrix cw = right_null_cols(sub_of(f.dom), ambient_of(f.dom));
  Matrix sub;
  if (cw.cols() == 0) {
    sub = Matrix::identity(k.rows(), ring_.modulus);
  } else {
    sub = left_nullspace(k.mul(cw));
  }
  Obj kobj = make_obj(k.rows(), sub);
  return {RuleVerdict::Representable, make_mor(kobj, f.dom, std::move(k)), ""};
}

MorRule PairCategory::cokernel_rule(const Mor& f) const {
  const Matrix& m = payload(f);
  Matrix proj = right_null_cols(howell_form(m).form, ambient_of(f.cod));
  // proj: vb x q with m*proj == 0; the map x -> x*proj has kernel im(m).
  Obj q = make_obj(proj.cols(), sub_of(f.cod).mul(proj));
  return {RuleVerdict::Representable, make_mor(f.cod, q, std::move(proj)), ""};
}

std::optional<bool> PairCategory::is_kernel_rule(const Mor& f) const {
  const Matrix& m = payload(f);
  if (!left_nullspace(m).is_zero()) return false;  // ambient not injective
  // The domain subspace must be the full preimage of the codomain subspace.
  Matrix cw = right_null_cols(sub_of(f.cod), ambient_of(f.cod));
  Matrix preimage = cw.cols() == 0 ? Matrix::identity(ambient_of(f.dom), ring_.modulus)
                                   : left_nullspace(m.mul(cw));
  return row_module_eq(sub_of(f.dom), preimage);
}

std::optional<bool> PairCategory::is_cokernel_rule(const Mor& f) const {
  const Matrix& m = payload(f);
  if (!is_surjective_rows(m)) return false;
  // The codomain subspace must be exactly the image of the domain's.
  return row_module_eq(sub_of(f.dom).mul(m), sub_of(f.cod));
}

}  // namespace stabex
