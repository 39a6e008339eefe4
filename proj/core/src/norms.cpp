#include "harmwave/norms.hpp"

#include <cmath>

#include "harmwave/errors.hpp"

namespace harmwave {

double NormSet::get(Norm which) const noexcept {
  switch (which) {
    case Norm::L1: return l1;
    case Norm::Linf: return linf;
    case Norm::L2: return l2;
    case Norm::H1: return h1;
  }
  return l2;
}

NormSet discrete_norms(const Vector& values, const TriMesh& mesh, const DofMap& dofs) {
  const Vector nodal = dofs.to_nodal(values);
  NormSet out;
  double l2_sq = 0.0;
  double grad_sq = 0.0;
  for (Index e = 0; e < mesh.num_triangles(); ++e) {
    const Triangle& tri = mesh.triangles()[e];
    const double area = mesh.area(e);
    const Eigen::Vector3d u(nodal[tri[0]], nodal[tri[1]], nodal[tri[2]]);
    for (int i = 0; i < 3; ++i) {
      const double mid = 0.5 * (u[i] + u[(i + 1) % 3]);
      out.l1 += area / 3.0 * std::abs(mid);
      l2_sq += area / 3.0 * mid * mid;
    }
    const Eigen::Vector2d grad = barycentric_gradients(mesh.corners(e)).transpose() * u;
    grad_sq += area * grad.squaredNorm();
  }
  out.linf = nodal.size() > 0 ? nodal.cwiseAbs().maxCoeff() : 0.0;
  out.l2 = std::sqrt(l2_sq);
  out.h1 = std::sqrt(l2_sq + grad_sq);
  return out;
}

double discrete_norm(const Vector& values, Norm which, const TriMesh& mesh, const DofMap& dofs) {
  return discrete_norms(values, mesh, dofs).get(which);
}

Vector prolong(const RepresentationMatrix& r, const Vector& coarse) {
  if (coarse.size() != r.cols()) throw ConfigError("prolong: coarse vector has wrong length");
  return r * coarse;
}

NormSet relative_errors(const Vector& fine_values, const Vector& reference, const TriMesh& mesh,
                        const DofMap& dofs) {
  const NormSet ref = discrete_norms(reference, mesh, dofs);
  if (!(ref.l1 > 0.0) || !(ref.linf > 0.0) || !(ref.l2 > 0.0) || !(ref.h1 > 0.0)) {
    throw UndefinedErrorMetric("relative error undefined: reference has zero norm");
  }
  const NormSet diff = discrete_norms(fine_values - reference, mesh, dofs);
  return {diff.l1 / ref.l1, diff.linf / ref.linf, diff.l2 / ref.l2, diff.h1 / ref.h1};
}

double relative_error(const Vector& coarse, const Vector& reference, const RepresentationMatrix& r,
                      const TriMesh& mesh, const DofMap& dofs, Norm which) {
  const double ref = discrete_norm(reference, which, mesh, dofs);
  if (!(ref > 0.0)) throw UndefinedErrorMetric("relative error undefined: reference has zero norm");
  return discrete_norm(prolong(r, coarse) - reference, which, mesh, dofs) / ref;
}

}  // namespace harmwave
