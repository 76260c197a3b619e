#include "gmeact/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gmeact {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIter: return "max_iter";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

void ConicProgram::validate() const {
  if (blocks.empty()) throw std::invalid_argument("conic program has no variable blocks");
  const auto nb = static_cast<int>(blocks.size());
  auto check_block = [&](int b, Eigen::Index rows, const char* what) {
    if (b < 0 || b >= nb) throw std::invalid_argument(std::string(what) + ": block index out of range");
    if (rows >= 0 && rows != blocks[b].dim) {
      throw std::invalid_argument(std::string(what) + ": matrix size does not match block " + blocks[b].name);
    }
  };
  for (const auto& blk : blocks) {
    if (blk.dim < 1) throw std::invalid_argument("block " + blk.name + " has non-positive dimension");
    if (!blk.dims.empty() && product(blk.dims) != static_cast<std::size_t>(blk.dim)) {
      throw std::invalid_argument("block " + blk.name + ": dims do not multiply to dim");
    }
  }
  for (const auto& t : objective) {
    check_block(t.block, t.c.rows(), "objective");
    if (!is_hermitian(t.c, 1e-12)) throw std::invalid_argument("objective matrix is not Hermitian");
  }
  for (const auto& eq : equalities) {
    if (eq.terms.empty()) throw std::invalid_argument("equality constraint without terms");
    for (const auto& t : eq.terms) {
      check_block(t.block, t.a.rows(), "equality");
      if (!is_hermitian(t.a, 1e-12)) throw std::invalid_argument("equality matrix is not Hermitian");
    }
  }
  for (const auto& cone : cones) {
    if (cone.terms.empty()) throw std::invalid_argument("cone " + cone.name + " has no terms");
    const auto dim = static_cast<Eigen::Index>(product(cone.dims));
    for (const auto& t : cone.terms) {
      check_block(t.block, dim, "cone term");
      if (t.transpose != cone.terms.front().transpose) {
        throw std::invalid_argument("cone " + cone.name + ": terms must share one partial-transpose set");
      }
      for (int s : t.transpose) {
        if (s < 0 || static_cast<std::size_t>(s) >= cone.dims.size()) {
          throw std::invalid_argument("cone " + cone.name + ": transposed subsystem out of range");
        }
      }
    }
    if (cone.offset) {
      if (cone.offset->rows() != dim) throw std::invalid_argument("cone " + cone.name + ": offset size mismatch");
      if (!is_hermitian(*cone.offset, 1e-12)) throw std::invalid_argument("cone offset is not Hermitian");
    }
  }
}

Matrix cone_value(const ConicProgram& p, std::size_t cone, const std::vector<Matrix>& blocks) {
  const auto& c = p.cones.at(cone);
  const auto dim = static_cast<Eigen::Index>(product(c.dims));
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& t : c.terms) sum += t.coeff * blocks.at(t.block);
  sum = partial_transpose(sum, c.dims, c.terms.front().transpose);
  if (c.offset) sum += *c.offset;
  return sum;
}

double objective_value(const ConicProgram& p, const std::vector<Matrix>& blocks) {
  double v = 0.0;
  for (const auto& t : p.objective) v += hs_inner(t.c, blocks.at(t.block));
  return v;
}

Matrix min_eig_projection(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const RealVector& w = es.eigenvalues();
  if (w(0) >= 0.0) return sym;
  const Matrix& v = es.eigenvectors();
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) > 0.0) out.noalias() += w(k) * v.col(k) * v.col(k).adjoint();
  }
  return out;
}

namespace {

// Precomputed structure of the ADMM linear subproblem.
struct Workspace {
  int nb = 0;
  std::vector<std::vector<std::pair<int, double>>> cone_coeffs;  // per cone: (block, coeff)
  Eigen::MatrixXd ginv;                                          // inverse block Gram matrix
  std::vector<std::vector<Matrix>> eq_dirs;                      // G^-1 A_i, per block
  std::vector<std::vector<const Matrix*>> eq_mats;               // A_i per block (nullable)
  Eigen::LDLT<Eigen::MatrixXd> eq_system;
  std::vector<const Matrix*> objective;                          // C_b per block (nullable)
};

Workspace prepare(const ConicProgram& p) {
  Workspace ws;
  ws.nb = static_cast<int>(p.blocks.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(ws.nb, ws.nb);
  for (const auto& cone : p.cones) {
    std::vector<std::pair<int, double>> merged;
    for (const auto& t : cone.terms) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return e.first == t.block; });
      if (it == merged.end()) merged.emplace_back(t.block, t.coeff);
      else it->second += t.coeff;
    }
    for (const auto& [b, cb] : merged) {
      for (const auto& [b2, cb2] : merged) gram(b, b2) += cb * cb2;
    }
    ws.cone_coeffs.push_back(std::move(merged));
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (lu.rank() < ws.nb) {
    throw std::invalid_argument("every variable block must be determined by the cone constraints");
  }
  ws.ginv = lu.inverse();

  ws.objective.assign(ws.nb, nullptr);
  for (const auto& t : p.objective) {
    if (ws.objective[t.block]) throw std::invalid_argument("duplicate objective term for a block");
    ws.objective[t.block] = &t.c;
  }

  const auto m = p.equalities.size();
  ws.eq_mats.assign(m, std::vector<const Matrix*>(ws.nb, nullptr));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& t : p.equalities[i].terms) ws.eq_mats[i][t.block] = &t.a;
  }
  ws.eq_dirs.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ws.eq_dirs[i].resize(ws.nb);
    for (int b = 0; b < ws.nb; ++b) {
      const auto d = p.blocks[b].dim;
      Matrix acc = Matrix::Zero(d, d);
      for (int b2 = 0; b2 < ws.nb; ++b2) {
        if (ws.eq_mats[i][b2] && ws.ginv(b, b2) != 0.0) acc += ws.ginv(b, b2) * *ws.eq_mats[i][b2];
      }
      ws.eq_dirs[i][b] = std::move(acc);
    }
  }
  if (m > 0) {
    Eigen::MatrixXd h(m, m);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t i = 0; i < m; ++i) {
        double v = 0.0;
        for (int b = 0; b < ws.nb; ++b) {
          if (ws.eq_mats[k][b]) v += hs_inner(*ws.eq_mats[k][b], ws.eq_dirs[i][b]);
        }
        h(k, i) = v;
      }
    }
    ws.eq_system.compute(h);
    if (ws.eq_system.info() != Eigen::Success || ws.eq_system.vectorD().cwiseAbs().minCoeff() < 1e-14) {
      throw std::invalid_argument("equality constraints are linearly dependent");
    }
  }
  return ws;
}

double frob2(const Matrix& m) { return m.squaredNorm(); }

}  // namespace

SolveResult AdmmSolver::solve(const ConicProgram& p, const SolverOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (!(opt.relaxation > 0.0 && opt.relaxation < 2.0)) {
    throw std::invalid_argument("relaxation factor must lie in (0, 2)");
  }
  p.validate();
  const Workspace ws = prepare(p);
  const auto nc = p.cones.size();
  const auto m = p.equalities.size();
  const int nb = ws.nb;

  std::vector<Matrix> x(nb);
  for (int b = 0; b < nb; ++b) x[b] = Matrix::Zero(p.blocks[b].dim, p.blocks[b].dim);
  std::vector<Matrix> s(nc), u(nc), lx(nc);
  std::vector<Eigen::Index> cdim(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    cdim[j] = static_cast<Eigen::Index>(product(p.cones[j].dims));
    s[j] = Matrix::Zero(cdim[j], cdim[j]);
    u[j] = Matrix::Zero(cdim[j], cdim[j]);
  }
  if (opt.seed != 0) {
    std::mt19937_64 gen(opt.seed);
    std::normal_distribution<double> normal(0.0, 1e-3);
    for (std::size_t j = 0; j < nc; ++j) {
      Matrix g(cdim[j], cdim[j]);
      for (Eigen::Index r = 0; r < g.rows(); ++r) {
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = cplx(normal(gen), normal(gen));
      }
      s[j] = g * g.adjoint();
    }
  }

  double sigma = opt.rho;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::vector<Matrix> u_mark = u;
  Eigen::VectorXd mu_mark = mu;
  long mark_iter = 0;

  SolveResult result;
  result.report.solver = name();
  SolveReport& rep = result.report;
  rep.status = SolveStatus::MaxIter;

  std::vector<Matrix> rhs(nb);
  std::vector<Matrix> s_old(nc);
  for (long it = 1; it <= opt.max_iter; ++it) {
    // X-update: least squares over the cone maps, closed form in G^-1.
    for (int b = 0; b < nb; ++b) rhs[b].setZero(p.blocks[b].dim, p.blocks[b].dim);
    for (std::size_t j = 0; j < nc; ++j) {
      Matrix target = s[j] - u[j];
      if (p.cones[j].offset) target -= *p.cones[j].offset;
      target = partial_transpose(target, p.cones[j].dims, p.cones[j].terms.front().transpose);
      for (const auto& [b, cb] : ws.cone_coeffs[j]) rhs[b] += cb * target;
    }
    for (int b = 0; b < nb; ++b) {
      if (ws.objective[b]) rhs[b] -= *ws.objective[b] / sigma;
    }
    for (int b = 0; b < nb; ++b) {
      x[b].setZero();
      for (int b2 = 0; b2 < nb; ++b2) {
        if (ws.ginv(b, b2) != 0.0) x[b] += ws.ginv(b, b2) * rhs[b2];
      }
    }
    if (m > 0) {
      Eigen::VectorXd t(static_cast<Eigen::Index>(m));
      for (std::size_t k = 0; k < m; ++k) {
        double v = -p.equalities[k].rhs;
        for (int b = 0; b < nb; ++b) {
          if (ws.eq_mats[k][b]) v += hs_inner(*ws.eq_mats[k][b], x[b]);
        }
        t(static_cast<Eigen::Index>(k)) = v;
      }
      const Eigen::VectorXd nu = ws.eq_system.solve(t);
      for (std::size_t i = 0; i < m; ++i) {
        for (int b = 0; b < nb; ++b) x[b] -= nu(static_cast<Eigen::Index>(i)) * ws.eq_dirs[i][b];
      }
      mu = sigma * nu;
    }
    for (int b = 0; b < nb; ++b) x[b] = 0.5 * (x[b] + x[b].adjoint()).eval();

    // S-update (cone projection) and scaled dual update.
    for (std::size_t j = 0; j < nc; ++j) {
      lx[j] = cone_value(p, j, x);
      s_old[j] = s[j];
      const Matrix hat = opt.relaxation * lx[j] + (1.0 - opt.relaxation) * s[j];
      s[j] = min_eig_projection(hat + u[j]);
      u[j] += hat - s[j];
    }

    const bool check = it % opt.check_every == 0 || it == opt.max_iter;
    const bool sample = opt.history_every > 0 && it % opt.history_every == 0;
    if (!check && !sample) continue;

    double rp2 = 0.0;
    for (std::size_t j = 0; j < nc; ++j) rp2 += frob2(lx[j] - s[j]);
    double rd2 = 0.0;
    {
      std::vector<Matrix> back(nb);
      for (int b = 0; b < nb; ++b) back[b] = Matrix::Zero(p.blocks[b].dim, p.blocks[b].dim);
      for (std::size_t j = 0; j < nc; ++j) {
        const Matrix ds = partial_transpose(s[j] - s_old[j], p.cones[j].dims, p.cones[j].terms.front().transpose);
        for (const auto& [b, cb] : ws.cone_coeffs[j]) back[b] += cb * ds;
      }
      for (int b = 0; b < nb; ++b) rd2 += frob2(back[b]);
    }
    const double rp = std::sqrt(rp2);
    const double rd = sigma * std::sqrt(rd2);
    if (sample) result.residual_history.emplace_back(it, std::max(rp, rd));
    if (!check) continue;

    const double pobj = objective_value(p, x);
    double dobj = 0.0;
    for (std::size_t k = 0; k < m; ++k) dobj -= p.equalities[k].rhs * mu(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < nc; ++j) {
      if (p.cones[j].offset) dobj -= hs_inner(-sigma * u[j], *p.cones[j].offset);
    }
    rep.iterations = it;
    rep.objective = pobj;
    rep.dual_objective = dobj;
    rep.primal_residual = rp;
    rep.dual_residual = rd;
    rep.gap = std::abs(pobj - dobj);
    if (rp <= opt.tol && rd <= opt.tol && rep.gap <= opt.tol * (1.0 + std::max(std::abs(pobj), std::abs(dobj)))) {
      rep.status = SolveStatus::Optimal;
      break;
    }

    // Infeasibility: the scaled duals drift along a Farkas direction.
    if (it - mark_iter >= 500) {
      const double span = static_cast<double>(it - mark_iter);
      std::vector<Matrix> z(nc);
      double zn2 = 0.0;
      double value = 0.0;
      for (std::size_t j = 0; j < nc; ++j) {
        z[j] = min_eig_projection(-sigma * (u[j] - u_mark[j]) / span);
        zn2 += frob2(z[j]);
        if (p.cones[j].offset) value += hs_inner(z[j], *p.cones[j].offset);
      }
      const Eigen::VectorXd dmu = (mu - mu_mark) / span;
      for (std::size_t k = 0; k < m; ++k) value += p.equalities[k].rhs * dmu(static_cast<Eigen::Index>(k));
      const double zn = std::sqrt(zn2);
      if (zn > 1e-6) {
        double res2 = 0.0;
        std::vector<Matrix> back(nb);
        for (int b = 0; b < nb; ++b) back[b] = Matrix::Zero(p.blocks[b].dim, p.blocks[b].dim);
        for (std::size_t j = 0; j < nc; ++j) {
          const Matrix zt = partial_transpose(z[j], p.cones[j].dims, p.cones[j].terms.front().transpose);
          for (const auto& [b, cb] : ws.cone_coeffs[j]) back[b] += cb * zt;
        }
        for (std::size_t k = 0; k < m; ++k) {
          for (int b = 0; b < nb; ++b) {
            if (ws.eq_mats[k][b]) back[b] -= dmu(static_cast<Eigen::Index>(k)) * *ws.eq_mats[k][b];
          }
        }
        for (int b = 0; b < nb; ++b) res2 += frob2(back[b]);
        if (value < -1e-3 * zn && std::sqrt(res2) < 1e-2 * zn) {
          rep.status = SolveStatus::Infeasible;
          break;
        }
      }
      u_mark = u;
      mu_mark = mu;
      mark_iter = it;
    }

    if (opt.adaptive_rho && it % (4 * opt.check_every) == 0) {
      double scale = 1.0;
      if (rp > 10.0 * rd) scale = 2.0;
      else if (rd > 10.0 * rp) scale = 0.5;
      if (sigma * scale > 1e6 * opt.rho || sigma * scale < 1e-6 * opt.rho) scale = 1.0;
      if (scale != 1.0) {
        sigma *= scale;
        for (auto& uj : u) uj /= scale;
        for (auto& uj : u_mark) uj /= scale;
      }
    }
  }

  result.blocks = std::move(x);
  result.cone_duals.resize(nc);
  for (std::size_t j = 0; j < nc; ++j) result.cone_duals[j] = -sigma * u[j];
  result.equality_duals.assign(mu.data(), mu.data() + mu.size());
  return result;
}

SolveResult solve_conic(const ConicProgram& p, const SolverOptions& opt) {
  AdmmSolver solver;
  return solver.solve(p, opt);
}

}  // namespace gmeact
