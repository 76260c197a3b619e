#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gmeact/experiment.hpp"
#include "gmeact/rng.hpp"

namespace gmeact {

namespace {

const Dims kQubit3{2, 2, 2};

// Projectors U^dagger |l><l| U for the 27 settings, 8 outcomes each.
const std::vector<Matrix>& pauli_projectors() {
  static const std::vector<Matrix> projectors = [] {
    std::vector<Matrix> out;
    const char letters[3] = {'X', 'Y', 'Z'};
    for (char a : letters) {
      for (char b : letters) {
        for (char c : letters) {
          const std::string basis{a, b, c};
          // Outcome l projects onto U^dagger |l>, the conjugated l-th row of U.
          const Matrix u = measurement_rotation(basis);
          for (int l = 0; l < 8; ++l) {
            const Vector v = u.row(l).adjoint();
            out.push_back(v * v.adjoint());
          }
        }
      }
    }
    return out;
  }();
  return projectors;
}

}  // namespace

TomographyResult tomograph_constituent(const DensityMatrix& truth, const TomographyOptions& opt, std::uint64_t seed,
                                       std::uint64_t stream) {
  if (truth.size() != 8) throw std::invalid_argument("tomography expects a three-qubit state");
  if (opt.shots < 1) throw std::invalid_argument("tomography shots must be >= 1");
  const auto& proj = pauli_projectors();
  const std::size_t nproj = proj.size();

  // Observed frequencies per (setting, outcome).
  std::vector<double> freq(nproj, 0.0);
  for (std::size_t s = 0; s < 27; ++s) {
    std::vector<double> p(8);
    for (int l = 0; l < 8; ++l) p[l] = std::max(0.0, hs_inner(proj[s * 8 + l], truth.matrix()));
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    if (opt.exact) {
      for (int l = 0; l < 8; ++l) freq[s * 8 + l] = p[l];
      continue;
    }
    std::vector<double> cdf(8);
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    auto g = derived_stream(seed, {stream, s});
    for (long k = 0; k < opt.shots; ++k) freq[s * 8 + sample_index(g, cdf)] += 1.0;
    for (int l = 0; l < 8; ++l) freq[s * 8 + l] /= static_cast<double>(opt.shots);
  }

  auto log_likelihood = [&](const Matrix& rho, std::vector<double>& probs) {
    double ll = 0.0;
    for (std::size_t k = 0; k < nproj; ++k) {
      probs[k] = hs_inner(proj[k], rho);
      if (freq[k] > 0.0) ll += freq[k] * std::log(std::max(probs[k], 1e-300));
    }
    return ll;
  };

  Matrix rho = Matrix::Identity(8, 8) / 8.0;
  std::vector<double> probs(nproj);
  double ll = log_likelihood(rho, probs);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Matrix r = Matrix::Zero(8, 8);
    for (std::size_t k = 0; k < nproj; ++k) {
      if (freq[k] > 0.0) r += (freq[k] / std::max(probs[k], 1e-300)) * proj[k];
    }
    Matrix next = r * rho * r;
    next = 0.5 * (next + next.adjoint());
    next /= trace_real(next);
    const double ll_next = log_likelihood(next, probs);
    const double gain = ll_next - ll;
    rho = std::move(next);
    ll = ll_next;
    if (gain < opt.tol) {
      ++it;
      break;
    }
  }
  return {DensityMatrix(project_psd(rho) / trace_real(project_psd(rho)), kQubit3), it, ll};
}

DensityMatrix reconstructed_mixture(double q, const TomographyOptions& opt, std::uint64_t seed, const NoiseModel& noise) {
  const auto spec = mixture_spec(q);
  noise.validate();
  Matrix mix = Matrix::Zero(8, 8);
  for (int i = 0; i < kNumConstituents; ++i) {
    if (spec.weights[i] == 0.0) continue;
    const DensityMatrix truth(noise.apply(constituent_ket(i).projector()), kQubit3);
    mix += spec.weights[i] * tomograph_constituent(truth, opt, seed, static_cast<std::uint64_t>(i)).rho.matrix();
  }
  return DensityMatrix(0.5 * (mix + mix.adjoint()), kQubit3);
}

}  // namespace gmeact
