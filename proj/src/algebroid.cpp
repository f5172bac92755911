#include "algmech/algebroid.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "algmech/errors.hpp"

namespace algmech {

namespace {

constexpr double kLoadCheckTol = 1e-9;

// Deterministic sample points used for the load-time structure checks.
std::vector<Eigen::VectorXd> sample_points(int n, int count, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = d(rng);
    pts.push_back(std::move(x));
  }
  return pts;
}

ScalarField entry_field(const nlohmann::json& j,
                        const std::vector<std::string>& vars,
                        const std::string& where) {
  try {
    if (j.is_number()) return ScalarField::constant(j.get<double>(),
                                                    static_cast<int>(vars.size()));
    if (j.is_string())
      return ScalarField::parse(j.get<std::string>(), vars);
  } catch (const ParseError& e) {
    throw ModelError("bad expression in " + where + ": " + e.what());
  }
  throw ModelError("entry in " + where + " must be a number or expression string");
}

const char* kBuiltinTm1 = R"({
  "name": "tm1", "n": 1, "m": 1,
  "rho": [["1"]],
  "C": [[["0"]]]
})";

const char* kBuiltinTm2 = R"({
  "name": "tm2", "n": 2, "m": 2,
  "rho": [["1", "0"], ["0", "1"]],
  "C": [[["0","0"],["0","0"]], [["0","0"],["0","0"]]]
})";

const char* kBuiltinSo3 = R"({
  "name": "so3", "n": 0, "m": 3,
  "rho": [],
  "C": [[[0,0,0],[0,0,1],[0,-1,0]],
        [[0,0,-1],[0,0,0],[1,0,0]],
        [[0,1,0],[-1,0,0],[0,0,0]]]
})";

const char* kBuiltinHeis3 = R"({
  "name": "heis3", "n": 0, "m": 3,
  "rho": [],
  "C": [[[0,0,0],[0,0,0],[0,0,0]],
        [[0,0,0],[0,0,0],[0,0,0]],
        [[0,1,0],[-1,0,0],[0,0,0]]]
})";

const char* kBuiltinAction1 = R"({
  "name": "action1", "n": 1, "m": 1,
  "rho": [["x1"]],
  "C": [[["0"]]]
})";

const char* kBuiltinBroken2 = R"({
  "name": "broken2", "n": 2, "m": 2,
  "rho": [["1", "0"], ["0", "x1"]],
  "C": [[["0","0"],["0","0"]], [["0","0"],["0","0"]]]
})";

const std::vector<std::pair<std::string, const char*>>& builtin_table() {
  static const std::vector<std::pair<std::string, const char*>> table = {
      {"tm1", kBuiltinTm1},       {"tm2", kBuiltinTm2},
      {"so3", kBuiltinSo3},       {"heis3", kBuiltinHeis3},
      {"action1", kBuiltinAction1}, {"broken2", kBuiltinBroken2},
  };
  return table;
}

}  // namespace

AlgebroidModel AlgebroidModel::from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ModelError("model must be a JSON object");
  for (const char* key : {"name", "n", "m", "rho", "C"})
    if (!spec.contains(key))
      throw ModelError(std::string("model is missing key \"") + key + "\"");

  AlgebroidModel M;
  if (!spec["name"].is_string()) throw ModelError("\"name\" must be a string");
  M.name_ = spec["name"].get<std::string>();
  if (!spec["n"].is_number_integer() || !spec["m"].is_number_integer())
    throw ModelError("\"n\" and \"m\" must be integers");
  M.n_ = spec["n"].get<int>();
  M.m_ = spec["m"].get<int>();
  if (M.n_ < 0) throw ModelError("\"n\" must be non-negative");
  if (M.m_ < 1) throw ModelError("\"m\" must be positive");

  const auto vars = M.base_vars();

  const auto& rho = spec["rho"];
  if (!rho.is_array() || static_cast<int>(rho.size()) != M.n_)
    throw ModelError("\"rho\" must have n rows");
  for (int i = 0; i < M.n_; ++i) {
    if (!rho[i].is_array() || static_cast<int>(rho[i].size()) != M.m_)
      throw ModelError("each \"rho\" row must have m entries");
    for (int a = 0; a < M.m_; ++a)
      M.rho_.push_back(entry_field(rho[i][a], vars, "rho"));
  }

  const auto& C = spec["C"];
  if (!C.is_array() || static_cast<int>(C.size()) != M.m_)
    throw ModelError("\"C\" must have m upper slices");
  for (int c = 0; c < M.m_; ++c) {
    if (!C[c].is_array() || static_cast<int>(C[c].size()) != M.m_)
      throw ModelError("each \"C\" slice must be m x m");
    for (int a = 0; a < M.m_; ++a) {
      if (!C[c][a].is_array() || static_cast<int>(C[c][a].size()) != M.m_)
        throw ModelError("each \"C\" slice must be m x m");
      for (int b = 0; b < M.m_; ++b)
        M.c_.push_back(entry_field(C[c][a][b], vars, "C"));
    }
  }

  for (const auto& x : sample_points(M.n_, 17, 0xA15EEDUL)) {
    auto Cx = M.structure(x);
    for (int c = 0; c < M.m_; ++c) {
      double skew = (Cx[c] + Cx[c].transpose()).cwiseAbs().maxCoeff();
      if (skew > kLoadCheckTol)
        throw ModelError("structure functions of \"" + M.name_ +
                         "\" are not skew-symmetric in the lower indices");
    }
  }

  double worst = 0.0;
  for (const auto& x : sample_points(M.n_, 17, 0xA15EEDUL))
    worst = std::max(worst, almost_lie_residual(M, x));
  M.almost_lie_ = worst <= kLoadCheckTol;

  return M;
}

AlgebroidModel AlgebroidModel::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ModelError("invalid JSON in model definition");
  return from_json(j);
}

AlgebroidModel AlgebroidModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

AlgebroidModel AlgebroidModel::builtin(const std::string& name) {
  for (const auto& [key, text] : builtin_table())
    if (key == name) return from_json_text(text);
  throw ModelError("unknown builtin model \"" + name + "\"");
}

std::vector<std::string> AlgebroidModel::builtin_names() {
  std::vector<std::string> names;
  for (const auto& [key, text] : builtin_table()) names.push_back(key);
  return names;
}

const ScalarField& AlgebroidModel::rho_field(int i, int a) const {
  return rho_[static_cast<std::size_t>(i * m_ + a)];
}

const ScalarField& AlgebroidModel::c_field(int c, int a, int b) const {
  return c_[static_cast<std::size_t>((c * m_ + a) * m_ + b)];
}

Eigen::MatrixXd AlgebroidModel::rho(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(n_, m_);
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < m_; ++a) out(i, a) = rho_field(i, a)(x);
  return out;
}

std::vector<Eigen::MatrixXd> AlgebroidModel::structure(
    const Eigen::VectorXd& x) const {
  std::vector<Eigen::MatrixXd> out;
  for (int c = 0; c < m_; ++c) {
    Eigen::MatrixXd slice(m_, m_);
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) slice(a, b) = c_field(c, a, b)(x);
    out.push_back(std::move(slice));
  }
  return out;
}

std::vector<std::string> AlgebroidModel::base_vars() const {
  std::vector<std::string> vars;
  for (int i = 1; i <= n_; ++i) vars.push_back("x" + std::to_string(i));
  return vars;
}

std::vector<std::string> AlgebroidModel::phase_vars(Side side) const {
  std::vector<std::string> vars = base_vars();
  const char* stem = side == Side::E ? "y" : "xi";
  for (int a = 1; a <= m_; ++a) vars.push_back(stem + std::to_string(a));
  return vars;
}

PhasePoint AlgebroidModel::point(Side side, Eigen::VectorXd x,
                                 Eigen::VectorXd fiber) const {
  PhasePoint p{side, std::move(x), std::move(fiber)};
  check(p);
  return p;
}

void AlgebroidModel::check(const PhasePoint& p) const {
  if (p.x.size() != n_ || p.fiber.size() != m_)
    throw std::invalid_argument("phase point dimensions do not match model \"" +
                                name_ + "\"");
}

Section AlgebroidModel::constant_section(const Eigen::VectorXd& values) const {
  if (values.size() != m_)
    throw std::invalid_argument("section needs m coefficients");
  Section s;
  for (int a = 0; a < m_; ++a)
    s.coeff.push_back(ScalarField::constant(values(a), n_));
  return s;
}

Section AlgebroidModel::frame_section(int a) const {
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(m_);
  unit(a) = 1.0;
  return constant_section(unit);
}

Eigen::VectorXd anchor(const AlgebroidModel& M, const Eigen::VectorXd& e,
                       const Eigen::VectorXd& x) {
  if (e.size() != M.m() || x.size() != M.n())
    throw std::invalid_argument("anchor argument dimensions");
  return M.rho(x) * e;
}

namespace {

void section_jets(const AlgebroidModel& M, const Section& s,
                  const Eigen::VectorXd& x, Eigen::VectorXd& values,
                  Eigen::MatrixXd& grads) {
  if (static_cast<int>(s.coeff.size()) != M.m())
    throw std::invalid_argument("section needs m coefficients");
  values.resize(M.m());
  grads.resize(M.n(), M.m());
  for (int a = 0; a < M.m(); ++a) {
    Jet2 j = s.coeff[static_cast<std::size_t>(a)].jet(x);
    values(a) = j.value();
    grads.col(a) = j.grad();
  }
}

}  // namespace

Eigen::VectorXd bracket(const AlgebroidModel& M, const Section& e,
                        const Section& e2, const Eigen::VectorXd& x) {
  Eigen::VectorXd f, g;
  Eigen::MatrixXd df, dg;
  section_jets(M, e, x, f, df);
  section_jets(M, e2, x, g, dg);
  Eigen::MatrixXd rho = M.rho(x);
  Eigen::VectorXd rf = rho * f;
  Eigen::VectorXd rg = rho * g;
  auto C = M.structure(x);
  Eigen::VectorXd out(M.m());
  for (int c = 0; c < M.m(); ++c)
    out(c) = f.dot(C[static_cast<std::size_t>(c)] * g) + rf.dot(dg.col(c)) -
             rg.dot(df.col(c));
  return out;
}

double de_function(const AlgebroidModel& M, const ScalarField& f,
                   const Eigen::VectorXd& e, const Eigen::VectorXd& x) {
  if (f.arity() != M.n())
    throw std::invalid_argument("base function must depend on x1..xn");
  return f.jet(x).grad().dot(anchor(M, e, x));
}

double de_oneform(const AlgebroidModel& M, const Section& xi, const Section& e,
                  const Section& e2, const Eigen::VectorXd& x) {
  const int m = M.m();
  if (static_cast<int>(xi.coeff.size()) != m)
    throw std::invalid_argument("dual section needs m coefficients");
  Jet2 pair1 = Jet2::constant(0.0, M.n());
  Jet2 pair2 = Jet2::constant(0.0, M.n());
  Eigen::VectorXd xiv(m), ev(m), e2v(m);
  for (int a = 0; a < m; ++a) {
    Jet2 jxi = xi.coeff[static_cast<std::size_t>(a)].jet(x);
    Jet2 je = e.coeff[static_cast<std::size_t>(a)].jet(x);
    Jet2 je2 = e2.coeff[static_cast<std::size_t>(a)].jet(x);
    pair1 = pair1 + jxi * je;
    pair2 = pair2 + jxi * je2;
    xiv(a) = jxi.value();
    ev(a) = je.value();
    e2v(a) = je2.value();
  }
  double t1 = pair2.grad().dot(anchor(M, ev, x));
  double t2 = pair1.grad().dot(anchor(M, e2v, x));
  return t1 - t2 - xiv.dot(bracket(M, e, e2, x));
}

double almost_lie_residual(const AlgebroidModel& M, const Eigen::VectorXd& x) {
  const int n = M.n(), m = M.m();
  if (n == 0) return 0.0;
  Eigen::MatrixXd val(n, m);
  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(n),
                                 Eigen::MatrixXd(n, m));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      Jet2 j = M.rho_field(i, a).jet(x);
      val(i, a) = j.value();
      for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)](i, a) = j.grad()(k);
    }
  auto C = M.structure(x);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double lhs = 0.0;
        for (int c = 0; c < m; ++c)
          lhs += val(i, c) * C[static_cast<std::size_t>(c)](a, b);
        double lie = 0.0;
        for (int j = 0; j < n; ++j)
          lie += val(j, a) * d[static_cast<std::size_t>(j)](i, b) -
                 val(j, b) * d[static_cast<std::size_t>(j)](i, a);
        worst = std::max(worst, std::abs(lhs - lie));
      }
  return worst;
}

double jacobi_residual(const AlgebroidModel& M, const Eigen::VectorXd& x) {
  const int n = M.n(), m = M.m();
  auto C = M.structure(x);
  Eigen::MatrixXd rho = M.rho(x);
  // dC[j] holds the x_j-derivatives of every slice.
  std::vector<std::vector<Eigen::MatrixXd>> dC(
      static_cast<std::size_t>(n),
      std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(m),
                                   Eigen::MatrixXd(m, m)));
  if (n > 0)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          Jet2 j = M.c_field(c, a, b).jet(x);
          for (int k = 0; k < n; ++k)
            dC[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)](a, b) =
                j.grad()(k);
        }

  auto term = [&](int a, int b, int c, int e) {
    double s = 0.0;
    for (int d2 = 0; d2 < m; ++d2)
      s += C[static_cast<std::size_t>(d2)](a, b) *
           C[static_cast<std::size_t>(e)](d2, c);
    for (int j = 0; j < n; ++j)
      s -= rho(j, c) * dC[static_cast<std::size_t>(j)][static_cast<std::size_t>(e)](a, b);
    return s;
  };

  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int e = 0; e < m; ++e)
          worst = std::max(std::abs(term(a, b, c, e) + term(b, c, a, e) +
                                    term(c, a, b, e)),
                           worst);
  return worst;
}

}  // namespace algmech
