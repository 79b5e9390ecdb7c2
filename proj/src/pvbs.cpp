#include "spingap/pvbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace spingap {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Matrix diag2(Complex a, Complex b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

PvbsParams::PvbsParams(std::vector<double> lambdas, std::map<std::pair<int, int>, double> thetas)
    : lambdas_(std::move(lambdas)), thetas_(std::move(thetas)) {
  for (double l : lambdas_) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ValidationError("PvbsParams: lambda_i must be positive and finite");
    }
  }
  for (const auto& [key, value] : thetas_) {
    const auto [i, j] = key;
    if (i < 0 || j <= i || j > n()) throw ValidationError("PvbsParams: theta index out of range");
    if (!std::isfinite(value)) throw ValidationError("PvbsParams: theta must be finite");
  }
}

double PvbsParams::lambda(int i) const {
  if (i == 0) return 1.0;
  if (i < 1 || i > n()) throw ValidationError("PvbsParams: lambda index out of range");
  return lambdas_[static_cast<std::size_t>(i) - 1];
}

double PvbsParams::theta(int i, int j) const {
  if (i == j) return 0.0;
  const bool swap = i > j;
  const auto key = swap ? std::make_pair(j, i) : std::make_pair(i, j);
  const auto it = thetas_.find(key);
  const double value = it == thetas_.end() ? 0.0 : it->second;
  return swap ? -value : value;
}

bool PvbsParams::gapped_admissible() const {
  return std::all_of(lambdas_.begin(), lambdas_.end(),
                     [](double l) { return std::abs(l - 1.0) > 1e-12; });
}

PvbsParams PvbsParams::from_json(const nlohmann::json& j) {
  std::vector<double> lambdas = j.at("lambda").get<std::vector<double>>();
  std::map<std::pair<int, int>, double> thetas;
  if (j.contains("theta")) {
    for (const auto& [key, value] : j.at("theta").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) throw ValidationError("PvbsParams: theta key must be 'i,j'");
      const int i = std::stoi(key.substr(0, comma));
      const int jj = std::stoi(key.substr(comma + 1));
      thetas[{i, jj}] = value.get<double>();
    }
  }
  return PvbsParams(std::move(lambdas), std::move(thetas));
}

nlohmann::json PvbsParams::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambdas_;
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [key, value] : thetas_) {
    t[std::to_string(key.first) + "," + std::to_string(key.second)] = value;
  }
  j["theta"] = t;
  return j;
}

NearestNeighborInteraction pvbs_interaction(const PvbsParams& p) {
  const int n = p.n();
  const Index d = p.d();
  std::vector<Vector> phis;
  for (int i = 1; i <= n; ++i) {
    Vector phi = Vector::Zero(d * d);
    phi(i * d + i) = 1.0;  // e_i (x) e_i
    phis.push_back(std::move(phi));
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Vector phi = Vector::Zero(d * d);
      phi(i * d + j) = 1.0;
      phi(j * d + i) = -std::exp(kI * p.theta(i, j)) * p.lambda(j) / p.lambda(i);
      phis.push_back(std::move(phi));
    }
  }
  Matrix cols(d * d, static_cast<Index>(phis.size()));
  for (Index c = 0; c < cols.cols(); ++c) cols.col(c) = phis[static_cast<std::size_t>(c)];
  NearestNeighborInteraction h;
  h.d = static_cast<int>(d);
  h.matrix = projector_onto(orthonormal_frame_of_span(cols, 1e-13));
  h.model = "pvbs(n=" + std::to_string(n) + ")";
  return h;
}

MpsFamily pvbs_mps(const PvbsParams& p) {
  const int n = p.n();
  MpsFamily f;
  f.d = n + 1;
  f.k = 1 << n;

  auto factor = [&](int particle, int slot) -> Matrix {
    // Factor occupied by `slot` inside the tensor product for matrix v_particle.
    if (particle == slot) return sigma_plus();
    if (particle == 0) {
      return diag2(std::exp(kI * p.theta(0, slot)), p.lambda(slot));
    }
    // P_{particle,slot} d_slot with P the half-phase diagonal.
    return diag2(std::exp(kI * p.theta(particle, slot) / 2.0),
                 Complex(p.lambda(slot), 0.0));
  };

  for (int i = 0; i <= n; ++i) {
    Matrix v = Matrix::Identity(1, 1);
    for (int slot = 1; slot <= n; ++slot) v = kron(v, factor(i, slot));
    f.matrices.push_back(std::move(v));
  }
  f.validate();
  return f;
}

std::vector<QuadraticRelation> pvbs_relations(const PvbsParams& p) {
  std::vector<QuadraticRelation> rels;
  const int n = p.n();
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      QuadraticRelation rel;
      rel.lhs.push_back({Complex(1.0), i, j});
      rel.rhs.push_back({std::exp(kI * p.theta(i, j)) * p.lambda(i) / p.lambda(j), j, i});
      rel.description = "v" + std::to_string(i) + " v" + std::to_string(j) + " exchange";
      rels.push_back(std::move(rel));
    }
  }
  for (int i = 1; i <= n; ++i) {
    QuadraticRelation rel;
    rel.lhs.push_back({Complex(1.0), i, i});
    rel.description = "v" + std::to_string(i) + "^2 = 0";
    rels.push_back(std::move(rel));
  }
  return rels;
}

Vector pvbs_ground_vector(const PvbsParams& p, int a, int b, const std::set<int>& s,
                          Index max_dim) {
  const int n_sites = b - a + 1;
  if (n_sites < 1) throw ValidationError("pvbs_ground_vector: empty chain");
  for (int i : s) {
    if (i < 1 || i > p.n()) throw ValidationError("pvbs_ground_vector: particle type out of range");
  }
  if (static_cast<int>(s.size()) > n_sites) {
    throw ValidationError("pvbs_ground_vector: more particles than sites");
  }

  const MpsFamily f = pvbs_mps(p);
  Matrix bmat = Matrix::Identity(1, 1);
  const Matrix occ = sigma_minus();
  const Matrix holeproj = diag2(1.0, 0.0);  // sigma^+ sigma^-
  for (int i = 1; i <= p.n(); ++i) bmat = kron(bmat, s.count(i) ? occ : holeproj);

  Vector psi = gamma_map(f, n_sites, bmat, max_dim);

  // Gauge: pin the amplitude of the word with the particles packed left in
  // ascending type order to prod_j (exp(i theta_{s_j,0}) lambda_{s_j})^j.
  Index idx = 0;
  {
    std::vector<int> word(static_cast<std::size_t>(n_sites), 0);
    int pos = 0;
    for (int i : s) word[static_cast<std::size_t>(pos++)] = i;
    for (int j = 0; j < n_sites; ++j) idx = idx * p.d() + word[static_cast<std::size_t>(j)];
  }
  Complex target = 1.0;
  {
    int j = 1;
    for (int i : s) {
      target *= std::pow(std::exp(kI * p.theta(i, 0)) * p.lambda(i), j);
      ++j;
    }
  }
  const Complex amp = psi(idx);
  if (std::abs(amp) < 1e-300) throw SolverError("pvbs_ground_vector: vanishing canonical amplitude");
  psi *= target / amp;
  return psi;
}

ClosedFormSpectrum pvbs_transfer_spectrum_closed_form(const PvbsParams& p) {
  ClosedFormSpectrum out;
  out.values = {Complex(1.0)};
  for (int j = 1; j <= p.n(); ++j) {
    const double l = p.lambda(j);
    const Complex phase = std::exp(kI * p.theta(0, j));
    const std::array<Complex, 4> choice = {Complex(1.0), l * phase, l * std::conj(phase),
                                           Complex(l * l)};
    std::vector<Complex> next;
    next.reserve(out.values.size() * 4);
    for (const Complex& base : out.values)
      for (const Complex& c : choice) next.push_back(base * c);
    out.values = std::move(next);
  }
  double top = 1.0;
  for (int j = 1; j <= p.n(); ++j)
    if (p.lambda(j) > 1.0) top *= p.lambda(j) * p.lambda(j);
  out.top = top;
  out.top_simple = p.gapped_admissible();
  return out;
}

GapBound gap_upper_bound(const PvbsParams& p, int n_sites) {
  GapBound out;
  if (p.n() == 0) {
    out.value = std::numeric_limits<double>::infinity();  // no particle to bound with
    out.finite = false;
    return out;
  }
  double cmax = 0.0;
  for (int i = 1; i <= p.n(); ++i) {
    const double l = p.lambda(i);
    if (std::abs(l - 1.0) <= 1e-12) {
      out.critical = true;
      return out;
    }
    cmax = std::max(cmax, (1.0 + l) / std::abs(1.0 - l));
  }
  if (n_sites <= cmax) {
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= p.n(); ++i) {
    const double l = p.lambda(i);
    const double c = (1.0 + l) / std::abs(1.0 - l);
    const double bulk = 1.0 - 2.0 / (l + 1.0 / l);
    best = std::min(best, bulk * (1.0 + (c - 1.0) / (n_sites - c)));
  }
  out.value = best;
  out.finite = true;
  return out;
}

Matrix one_particle_hamiltonian(double lambda, double theta_i0, int n_sites) {
  if (n_sites < 2) throw ValidationError("one_particle_hamiltonian: need N >= 2");
  if (!(lambda > 0.0)) throw ValidationError("one_particle_hamiltonian: lambda must be positive");
  Matrix k = Matrix::Zero(n_sites, n_sites);
  const Complex hop = std::exp(-kI * theta_i0);
  for (int x = 0; x + 1 < n_sites; ++x) {
    k(x, x + 1) = hop;
    k(x + 1, x) = std::conj(hop);
  }
  k(0, 0) = 1.0 / lambda;
  k(n_sites - 1, n_sites - 1) = lambda;
  return k;
}

Matrix one_particle_sector_hamiltonian(double lambda, double theta_i0, int n_sites) {
  const Matrix k = one_particle_hamiltonian(lambda, theta_i0, n_sites);
  return Matrix::Identity(n_sites, n_sites) - k / (lambda + 1.0 / lambda);
}

OneParticleCertificate one_particle_gap_certificate(double lambda, int n_max) {
  if (std::abs(lambda - 1.0) <= 1e-12) {
    throw ValidationError("one_particle_gap_certificate: critical model (lambda = 1); "
                          "the top of K merges with the band edge at 2");
  }
  if (n_max < 2) throw ValidationError("one_particle_gap_certificate: need N_max >= 2");
  OneParticleCertificate cert;
  cert.lambda = lambda;
  const double e_top = lambda + 1.0 / lambda;
  cert.limit_gap = 1.0 - 2.0 / e_top;
  cert.min_gap = std::numeric_limits<double>::infinity();
  cert.min_interval_clearance = std::numeric_limits<double>::infinity();
  cert.pass = true;

  // Ratios u_N / u_{N-1} of second-kind Chebyshev values at E/2, from the
  // closed form in powers of mu = max(lambda, 1/lambda); checks the three-term
  // recursion at E = lambda + 1/lambda without overflowing.
  const double mu = std::max(lambda, 1.0 / lambda);
  auto ratio = [&](int m) {
    const double num = 1.0 - std::pow(mu, -2.0 * (m + 1));
    const double den = 1.0 - std::pow(mu, -2.0 * m);
    return mu * num / den;
  };

  for (int n_sites = 2; n_sites <= n_max; ++n_sites) {
    auto es = hermitian_eigensystem(one_particle_hamiltonian(lambda, 0.0, n_sites));
    const RealVector& ev = es.eigenvalues;
    const double top = ev(n_sites - 1);
    cert.max_top_error = std::max(cert.max_top_error, std::abs(top - e_top));
    if (std::abs(top - e_top) > 1e-10) {
      cert.pass = false;
      cert.failure = "top eigenvalue off at N=" + std::to_string(n_sites);
    }
    const double second = ev(n_sites - 2);
    cert.min_interval_clearance = std::min(cert.min_interval_clearance, 2.0 - second);
    if (second >= 2.0 + 1e-10) {
      cert.pass = false;
      cert.failure = "eigenvalue " + std::to_string(second) + " inside [2, lambda+1/lambda) at N=" +
                     std::to_string(n_sites);
    }
    const double gap = 1.0 - second / e_top;
    cert.gaps.push_back(gap);
    cert.min_gap = std::min(cert.min_gap, gap);
    if (gap < cert.limit_gap - 1e-10) {
      cert.pass = false;
      cert.failure = "gap " + std::to_string(gap) + " below limit at N=" + std::to_string(n_sites);
    }
    if (n_sites >= 4) {
      const double r1 = ratio(n_sites - 1);
      const double r2 = ratio(n_sites - 2);
      const double resid = std::abs(r1 * r2 - e_top * r2 + 1.0);
      cert.max_recursion_residual = std::max(cert.max_recursion_residual, resid);
      if (resid > 1e-10) {
        cert.pass = false;
        cert.failure = "Chebyshev recursion residual at N=" + std::to_string(n_sites);
      }
    }
  }
  return cert;
}

PhaseLabel classify(const PvbsParams& p) {
  PhaseLabel label;
  for (int i = 1; i <= p.n(); ++i) {
    const double l = p.lambda(i);
    if (std::abs(l - 1.0) <= 1e-12) {
      throw ValidationError("classify: critical model, lambda_" + std::to_string(i) + " = 1");
    }
    if (l < 1.0)
      ++label.n_left;
    else
      ++label.n_right;
  }
  return label;
}

namespace {

std::vector<int> ascending_order(const std::vector<double>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[static_cast<std::size_t>(a)] < v[static_cast<std::size_t>(b)]; });
  return order;
}

// Permutation on C^{n+1} fixing e_0 and sending slot j to original label
// order[j-1]+1.
Matrix label_permutation(const std::vector<int>& order) {
  const Index d = static_cast<Index>(order.size()) + 1;
  Matrix u = Matrix::Zero(d, d);
  u(0, 0) = 1.0;
  for (Index j = 1; j < d; ++j) u(order[static_cast<std::size_t>(j) - 1] + 1, j) = 1.0;
  return u;
}

// u_from * exp(s log(u_from^* u_to)) with the principal logarithm.
Matrix unitary_interpolate(const Matrix& u_from, const Matrix& u_to, double s) {
  const Matrix w = u_from.adjoint() * u_to;
  Eigen::ComplexEigenSolver<Matrix> ces(w);
  if (ces.info() != Eigen::Success) throw SolverError("unitary_interpolate: eigensolver failed");
  const Index d = w.rows();
  Matrix diag = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    diag(i, i) = std::exp(kI * (s * std::arg(ces.eigenvalues()(i))));
  }
  return u_from * ces.eigenvectors() * diag * ces.eigenvectors().inverse();
}

}  // namespace

EquivalencePathPoint equivalence_path(const PvbsParams& p1, const PvbsParams& p2, double s) {
  if (s < 0.0 || s > 1.0) throw ValidationError("equivalence_path: s must lie in [0,1]");
  const PhaseLabel l1 = classify(p1);
  const PhaseLabel l2 = classify(p2);
  if (!(l1 == l2)) {
    throw PhaseObstructionError(
        "equivalence_path: phase labels (" + std::to_string(l1.n_left) + "," +
        std::to_string(l1.n_right) + ") and (" + std::to_string(l2.n_left) + "," +
        std::to_string(l2.n_right) + ") differ; any interpolation closes the gap");
  }
  const int n = p1.n();
  const auto o1 = ascending_order(p1.lambdas());
  const auto o2 = ascending_order(p2.lambdas());

  std::vector<double> lambdas(static_cast<std::size_t>(n));
  std::map<std::pair<int, int>, double> thetas;
  auto orig = [&](const std::vector<int>& o, int slot) { return slot == 0 ? 0 : o[static_cast<std::size_t>(slot) - 1] + 1; };
  for (int j = 1; j <= n; ++j) {
    lambdas[static_cast<std::size_t>(j) - 1] =
        (1.0 - s) * p1.lambda(orig(o1, j)) + s * p2.lambda(orig(o2, j));
  }
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      thetas[{i, j}] = (1.0 - s) * p1.theta(orig(o1, i), orig(o1, j)) +
                       s * p2.theta(orig(o2, i), orig(o2, j));
    }
  }
  EquivalencePathPoint point{NearestNeighborInteraction{}, PvbsParams(lambdas, thetas), Matrix()};

  const Matrix u1 = label_permutation(o1);
  const Matrix u2 = label_permutation(o2);
  point.unitary = unitary_interpolate(u1, u2, s);

  NearestNeighborInteraction h = pvbs_interaction(point.params);
  const Matrix uu = kron(point.unitary, point.unitary);
  h.matrix = uu * h.matrix * uu.adjoint();
  h.model = "pvbs-path(s=" + std::to_string(s) + ")";
  point.interaction = std::move(h);
  return point;
}

SectorDecomposition sector_decomposition(const PvbsParams& p, int n_sites, Index max_dim) {
  const int n = p.n();
  const Index d = p.d();
  Index total = 1;
  for (int i = 0; i < n_sites; ++i) {
    if (total > max_dim / d) throw SizeError("sector_decomposition: basis too large");
    total *= d;
  }
  std::map<std::vector<int>, std::vector<Index>> buckets;
  for (Index idx = 0; idx < total; ++idx) {
    std::vector<int> occ(static_cast<std::size_t>(n), 0);
    Index rest = idx;
    for (int site = 0; site < n_sites; ++site) {
      const int letter = static_cast<int>(rest % d);
      rest /= d;
      if (letter > 0) ++occ[static_cast<std::size_t>(letter) - 1];
    }
    buckets[occ].push_back(idx);
  }
  SectorDecomposition out;
  for (auto& [occ, idxs] : buckets) {
    out.occupations.push_back(occ);
    out.sectors.push_back(std::move(idxs));
  }
  return out;
}

}  // namespace spingap
