#include "dyncoh/supermap.hpp"

#include <cmath>

#include "dyncoh/measures.hpp"

namespace dyncoh {

Superchannel::Superchannel(SuperDims dims, PrePost pp) : dims_(dims), real_(std::move(pp)) {
  const auto& r = std::get<PrePost>(real_);
  if (r.pre.din() != dims_.dB0 || r.pre.dout() != dims_.dA0 * r.denv)
    throw DimensionError("Superchannel: pre-processing dimensions inconsistent");
  if (r.post.din() != dims_.dA1 * r.denv || r.post.dout() != dims_.dB1)
    throw DimensionError("Superchannel: post-processing dimensions inconsistent");
}

Superchannel::Superchannel(SuperDims dims, MeasurePrepare mp)
    : dims_(dims), real_(std::move(mp)) {
  for (const auto& br : std::get<MeasurePrepare>(real_).branches) {
    if (br.effect.rows() != dims_.in_choi_dim())
      throw DimensionError("Superchannel: effect dimension mismatch");
    if (br.target.din() != dims_.dB0 || br.target.dout() != dims_.dB1)
      throw DimensionError("Superchannel: target dimension mismatch");
  }
}

Superchannel::Superchannel(SuperDims dims, LinearAction la) : dims_(dims), real_(std::move(la)) {
  const auto& m = std::get<LinearAction>(real_).matrix;
  Eigen::Index ni = dims_.in_choi_dim(), no = dims_.out_choi_dim();
  if (m.rows() != no * no || m.cols() != ni * ni)
    throw DimensionError("Superchannel: action matrix shape mismatch");
}

ComplexMatrix Superchannel::apply_choi(const ComplexMatrix& x) const {
  const int nA = dims_.in_choi_dim();
  if (x.rows() != nA || x.cols() != nA)
    throw DimensionError("apply_choi: operator dimension mismatch");

  if (is_measure_prepare()) {
    const auto& mp = std::get<MeasurePrepare>(real_);
    const int nB = dims_.out_choi_dim();
    ComplexMatrix out = ComplexMatrix::Zero(nB, nB);
    for (const auto& br : mp.branches) {
      Complex w = br.affine * x.trace() + br.coeff * (br.effect * x).trace();
      out += w * br.target.choi();
    }
    return out;
  }
  if (is_prepost()) {
    const auto& pp = std::get<PrePost>(real_);
    const int e = pp.denv;
    // slot (x) id_E at the Choi level, linearly in x; the identity factor
    // contributes phi+_E
    ComplexMatrix phi = QuantumState::maximally_entangled(e).density;
    ComplexMatrix big = kron(x, phi);
    std::vector<int> dd = {dims_.dA0, dims_.dA1, e, e};
    ComplexMatrix mid_choi = reorder_subsystems(big, dd, {0, 2, 1, 3});
    ComplexMatrix t_mid = transfer_from_choi(mid_choi, dims_.dA0 * e, dims_.dA1 * e);
    ComplexMatrix t_total = pp.post.transfer() * t_mid * pp.pre.transfer();
    return choi_from_transfer(t_total, dims_.dB0, dims_.dB1);
  }
  const auto& la = std::get<LinearAction>(real_);
  ComplexVector v = la.matrix * vec(x);
  return unvec(v, dims_.out_choi_dim(), dims_.out_choi_dim());
}

QuantumChannel Superchannel::apply(const QuantumChannel& n, double tol) const {
  if (n.din() != dims_.dA0 || n.dout() != dims_.dA1)
    throw DimensionError("Superchannel::apply: channel dimension mismatch");
  ComplexMatrix j = apply_choi(n.choi());
  return QuantumChannel(dims_.dB0, dims_.dB1, j, tol);
}

ComplexMatrix Superchannel::action_matrix() const {
  if (is_linear()) return std::get<LinearAction>(real_).matrix;
  const int nA = dims_.in_choi_dim(), nB = dims_.out_choi_dim();
  ComplexMatrix s(Eigen::Index(nB) * nB, Eigen::Index(nA) * nA);
  for (int mu = 0; mu < nA; ++mu)
    for (int nu = 0; nu < nA; ++nu) {
      ComplexMatrix img = apply_choi(matrix_unit(nA, mu, nu));
      s.col(Eigen::Index(mu) * nA + nu) = vec(img);
    }
  return s;
}

ComplexMatrix Superchannel::supermap_choi() const {
  const int nA = dims_.in_choi_dim(), nB = dims_.out_choi_dim();
  ComplexMatrix c = ComplexMatrix::Zero(Eigen::Index(nA) * nB, Eigen::Index(nA) * nB);
  for (int mu = 0; mu < nA; ++mu)
    for (int nu = 0; nu < nA; ++nu) {
      ComplexMatrix img = apply_choi(matrix_unit(nA, mu, nu));
      c.block(Eigen::Index(mu) * nB, Eigen::Index(nu) * nB, nB, nB) = img;
    }
  return c;
}

Superchannel Superchannel::identity_super(int d) {
  PrePost pp{identity_channel(d), identity_channel(d), 1};
  return Superchannel(SuperDims{d, d, d, d}, std::move(pp));
}

Superchannel dephasing_super(int dB0, int dB1) {
  const int n = dB0 * dB1;
  ComplexMatrix s = ComplexMatrix::Zero(Eigen::Index(n) * n, Eigen::Index(n) * n);
  for (int r = 0; r < n; ++r) s(Eigen::Index(r) * n + r, Eigen::Index(r) * n + r) = 1.0;
  return Superchannel(SuperDims{dB0, dB1, dB0, dB1}, LinearAction{std::move(s)});
}

Superchannel compose_super(const Superchannel& outer, const Superchannel& inner) {
  if (outer.dims().dA0 != inner.dims().dB0 || outer.dims().dA1 != inner.dims().dB1)
    throw DimensionError("compose_super: inner/outer dimensions differ");
  SuperDims d{inner.dims().dA0, inner.dims().dA1, outer.dims().dB0, outer.dims().dB1};
  return Superchannel(d, LinearAction{outer.action_matrix() * inner.action_matrix()});
}

Superchannel tensor_super(const Superchannel& a, const Superchannel& b) {
  SuperDims da = a.dims(), db = b.dims();
  SuperDims d{da.dA0 * db.dA0, da.dA1 * db.dA1, da.dB0 * db.dB0, da.dB1 * db.dB1};
  const int nA = d.in_choi_dim(), nB = d.out_choi_dim();
  std::vector<int> din = {da.dA0, db.dA0, da.dA1, db.dA1};
  std::vector<int> dout = {da.dB0, db.dB0, da.dB1, db.dB1};
  ComplexMatrix s(Eigen::Index(nB) * nB, Eigen::Index(nA) * nA);
  for (int mu = 0; mu < nA; ++mu)
    for (int nu = 0; nu < nA; ++nu) {
      // factor the matrix unit across the A/B legs
      ComplexMatrix unit = matrix_unit(nA, mu, nu);
      ComplexMatrix fact = reorder_subsystems(unit, din, {0, 2, 1, 3});
      // fact = E^a (x) E^b on (a-choi)(b-choi); read off the factors by index
      int na = da.in_choi_dim(), nb = db.in_choi_dim();
      ComplexMatrix ea = ComplexMatrix::Zero(na, na), eb = ComplexMatrix::Zero(nb, nb);
      bool got = false;
      for (int p = 0; p < na && !got; ++p)
        for (int q = 0; q < na && !got; ++q)
          for (int r = 0; r < nb && !got; ++r)
            for (int t = 0; t < nb && !got; ++t)
              if (std::abs(fact(Eigen::Index(p) * nb + r, Eigen::Index(q) * nb + t)) > 0.5) {
                ea(p, q) = 1;
                eb(r, t) = 1;
                got = true;
              }
      ComplexMatrix ia = a.apply_choi(ea), ib = b.apply_choi(eb);
      ComplexMatrix img = reorder_subsystems(kron(ia, ib),
                                             {da.dB0, da.dB1, db.dB0, db.dB1}, {0, 2, 1, 3});
      s.col(Eigen::Index(mu) * nA + nu) = vec(img);
    }
  return Superchannel(d, LinearAction{std::move(s)});
}

SuperchannelVerdict admissibility_check(const Superchannel& t, double tol) {
  SuperchannelVerdict v;
  v.property = SuperProperty::Admissible;

  ComplexMatrix c = t.supermap_choi();
  double neg = std::max(0.0, -min_eigenvalue(c));

  // TP compatibility: the maximally mixed Choi must map to a proper channel
  // marginal, and marginal-traceless directions must stay marginal-traceless.
  const auto& d = t.dims();
  const int nA = d.in_choi_dim();
  ComplexMatrix j0 = identity(nA) / double(nA);
  ComplexMatrix img0 = t.apply_choi(j0);
  ComplexMatrix m0 = partial_trace(img0, {d.dB0, d.dB1}, {0});
  double tp = (m0 - identity(d.dB0) / double(d.dB0)).cwiseAbs().maxCoeff();

  int bad_index = -1;
  for (int mu = 0; mu < nA && tp <= tol; ++mu)
    for (int nu = 0; nu < nA; ++nu) {
      ComplexMatrix e = matrix_unit(nA, mu, nu);
      ComplexMatrix marg_in = partial_trace(e, {d.dA0, d.dA1}, {0});
      ComplexMatrix tangent = e - kron(marg_in, identity(d.dA1) / double(d.dA1));
      ComplexMatrix img = t.apply_choi(tangent);
      double r = partial_trace(img, {d.dB0, d.dB1}, {0}).cwiseAbs().maxCoeff();
      if (r > tp) {
        tp = r;
        bad_index = mu * nA + nu;
      }
      if (tp > tol) break;
    }

  v.residual = std::max(neg, tp);
  v.pass = v.residual <= tol;
  if (!v.pass) {
    if (neg >= tp) {
      auto eg = eig_hermitian(c, 1e-6);
      v.witness = eg.vectors.col(0);  // most negative direction
      v.note = "supermap Choi has negative eigenvalue " + std::to_string(-neg);
    } else {
      v.witness_index = bad_index;
      v.note = "trace-preservation violated on basis element";
    }
  }
  return v;
}

SuperchannelVerdict misc_check(const Superchannel& t, double tol) {
  SuperchannelVerdict v;
  v.property = SuperProperty::MISC;
  const auto& d = t.dims();
  if (d.dA0 > 4)
    throw std::runtime_error("misc_check: deterministic enumeration capped at din <= 4");
  v.pass = true;
  auto dets = deterministic_channels(d.dA0, d.dA1);
  for (size_t k = 0; k < dets.size(); ++k) {
    ComplexMatrix out = t.apply_choi(dets[k].choi());
    ComplexMatrix off = out - ComplexMatrix(out.diagonal().asDiagonal());
    double r = trace_norm(off);
    if (r > v.residual) {
      v.residual = r;
      if (r > tol) {
        v.pass = false;
        v.witness = dets[k].choi();
        v.witness_index = static_cast<int>(k);
      }
    }
  }
  return v;
}

SuperchannelVerdict disc_check(const Superchannel& t, double tol) {
  SuperchannelVerdict v;
  v.property = SuperProperty::DISC;
  const auto& d = t.dims();
  const int nA = d.in_choi_dim();
  v.pass = true;
  for (int mu = 0; mu < nA; ++mu)
    for (int nu = 0; nu < nA; ++nu) {
      ComplexMatrix e = matrix_unit(nA, mu, nu);
      // Delta_A at the Choi level is the full pinch
      ComplexMatrix lhs = choi_pinch(t.apply_choi(e));
      ComplexMatrix rhs = t.apply_choi(choi_pinch(e));
      double r = trace_norm(lhs - rhs);
      if (r > v.residual) {
        v.residual = r;
        if (r > tol) {
          v.pass = false;
          v.witness = lhs - rhs;
          v.witness_index = mu * nA + nu;
        }
      }
    }
  return v;
}

SuperchannelVerdict delta_misc_check(const Superchannel& t, double delta) {
  SuperchannelVerdict v;
  v.property = SuperProperty::DeltaMISC;
  v.delta = delta;
  const auto& d = t.dims();
  if (d.dA0 > 4)
    throw std::runtime_error("delta_misc_check: deterministic enumeration capped at din <= 4");
  v.pass = true;
  auto dets = deterministic_channels(d.dA0, d.dA1);
  // Distinct outputs only: many extreme points collapse to the same channel.
  std::vector<ComplexMatrix> seen;
  for (size_t k = 0; k < dets.size(); ++k) {
    ComplexMatrix out = t.apply_choi(dets[k].choi());
    bool dup = false;
    for (const auto& s : seen)
      if ((s - out).cwiseAbs().maxCoeff() < 1e-13) {
        dup = true;
        break;
      }
    if (dup) continue;
    seen.push_back(out);
    QuantumChannel och(d.dB0, d.dB1, out, 1e-6);
    double cr = cr_channel(och);
    if (cr > v.residual) {
      v.residual = cr;
      if (cr > delta + 1e-7) {
        v.pass = false;
        v.witness = dets[k].choi();
        v.witness_index = static_cast<int>(k);
      }
    }
  }
  return v;
}

std::string to_string(SuperProperty p) {
  switch (p) {
    case SuperProperty::Admissible: return "admissible";
    case SuperProperty::MISC: return "MISC";
    case SuperProperty::DISC: return "DISC";
    case SuperProperty::DeltaMISC: return "deltaMISC";
  }
  return "?";
}

PartialApplyResult apply_super_on_B(const Superchannel& theta_B,
                                    const QuantumChannel& nab, int dA0, int dA1) {
  if (!theta_B.is_measure_prepare())
    throw std::runtime_error("apply_super_on_B: MeasurePrepare realization required");
  const auto& od = theta_B.dims();
  if (nab.din() != dA0 * od.dA0 || nab.dout() != dA1 * od.dA1)
    throw DimensionError("apply_super_on_B: channel dimensions mismatch");

  // (A0 B0 A1 B1) -> (A0 A1 B0 B1)
  std::vector<int> dims_in = {dA0, od.dA0, dA1, od.dA1};
  ComplexMatrix jr = reorder_subsystems(nab.choi(), dims_in, {0, 2, 1, 3});
  const int na = dA0 * dA1, nb = od.in_choi_dim();
  const int nbo = od.out_choi_dim();

  PartialApplyResult res;
  ComplexMatrix out = ComplexMatrix::Zero(Eigen::Index(na) * nbo, Eigen::Index(na) * nbo);
  for (const auto& br : theta_B.measure_prepare().branches) {
    ComplexMatrix eff = br.affine * identity(nb) + br.coeff * br.effect;
    // X = Tr_B[(I_A (x) eff^T) jr]; the transpose implements Tr(eff J_B)
    // blockwise on the B factor.
    ComplexMatrix x = ComplexMatrix::Zero(na, na);
    for (int p = 0; p < na; ++p)
      for (int q = 0; q < na; ++q) {
        Complex acc(0, 0);
        for (int r = 0; r < nb; ++r)
          for (int s = 0; s < nb; ++s)
            acc += eff(s, r) * jr(Eigen::Index(p) * nb + r, Eigen::Index(q) * nb + s);
        x(p, q) = acc;
      }
    res.branch_ops.push_back(x);
    out += kron(x, br.target.choi());
  }
  // back to (A0 B0 A1 B1)
  std::vector<int> dims_out = {dA0, dA1, od.dB0, od.dB1};
  ComplexMatrix oj = reorder_subsystems(out, dims_out, {0, 2, 1, 3});
  res.out = QuantumChannel(dA0 * od.dB0, dA1 * od.dB1, oj, 1e-6);
  return res;
}

}  // namespace dyncoh
