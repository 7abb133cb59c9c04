// Command-line front end: structured JSON config in, CSV / JSON record out.
//
// Subcommands: verify | spectrum | roots | thermo | scan, each taking a config
// path.  Exit codes: 0 success, 1 identity/assertion failure, 2 config error.
// Complex values are re/im pairs everywhere (config arrays, CSV column pairs).

#include "CLI11.hpp"
#include "json.hpp"

#include <d2chain/bethe.hpp>
#include <d2chain/scaling.hpp>
#include <d2chain/thermo.hpp>
#include <d2chain/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using njson = nlohmann::ordered_json;
using namespace d2chain;

constexpr const char* kVersion = "d2chain 0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char b[48];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

njson to_json(Complex z) { return njson::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Config

struct RunConfig {
  std::string kind;  // d2_trig d2_rational xxz_trig xxx_rational xxx_reduced
                     // xxz_periodic xxx_periodic
  int sites = 2;
  double eta = 0.5;
  std::vector<Complex> theta;  // empty = homogeneous

  std::string boundary_form = "none";  // raw hermitian fields xxx xxx_pair
  D2Boundary chain;                    // sector kinds use chain.sig
  bool has_tau = false;
  XXXReducedBoundary red{0.0, 0.0, 0.0};
  XXXReducedBoundary red_b{0.0, 0.0, 0.0};

  std::uint64_t seed = 1;
  double tol = 1e-10;
  double class_tol = 1e-3;
  long dense_cap = 2048;
  bool fault = false;
  std::string spectrum_mode = "auto";  // full | ground | auto

  std::string csv_path, record_path;

  // scan section
  std::string scan_quantity, scan_backend = "dense", scan_fit = "none";
  std::vector<int> scan_sites;

  njson echo;
};

double need_number(const njson& j, const std::string& key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ConfigError(std::string(where) + ": missing numeric field '" + key +
                      "'");
  return j.at(key).get<double>();
}

Complex need_complex(const njson& j, const std::string& key,
                     const char* where) {
  if (!j.contains(key))
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const njson& v = j.at(key);
  if (v.is_number()) return Complex{v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex{v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(std::string(where) + ": field '" + key +
                    "' must be a number or a re/im pair");
}

XxzBoundary read_raw_sector(const njson& js, const char* where) {
  XxzBoundary b;
  b.s = need_complex(js, "s", where);
  b.s1 = need_complex(js, "s1", where);
  b.s2 = need_complex(js, "s2", where);
  b.sp = need_complex(js, "sprime", where);
  b.s1p = need_complex(js, "s1p", where);
  b.s2p = need_complex(js, "s2p", where);
  return b;
}

XxzBoundary read_hermitian_sector(const njson& js, double eta,
                                  const char* where) {
  const double s = need_number(js, "s", where);
  const Complex s1 = need_complex(js, "s1", where);
  const double sp = need_number(js, "sprime", where);
  const double r = need_number(js, "r", where);
  const double m = need_number(js, "m", where);
  return hermitian_xxz_boundary(eta, s, s1, sp, r, m);
}

XXXReducedBoundary read_xxx_triple(const njson& js, const char* where) {
  return {need_number(js, "p", where), need_number(js, "q", where),
          need_number(js, "xi", where)};
}

bool kind_is_trig(const std::string& k) {
  return k == "d2_trig" || k == "xxz_trig" || k == "xxz_periodic";
}
bool kind_is_periodic(const std::string& k) {
  return k == "xxz_periodic" || k == "xxx_periodic";
}
bool kind_is_d2(const std::string& k) {
  return k == "d2_trig" || k == "d2_rational";
}

RunConfig parse_config(const std::string& path,
                       std::optional<std::uint64_t> seed_override,
                       std::optional<double> tol_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  njson j;
  try {
    j = njson::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }

  RunConfig cfg;
  if (!j.contains("model") || !j.at("model").is_object())
    throw ConfigError("config: missing 'model' section");
  const njson& jm = j.at("model");
  if (!jm.contains("kind") || !jm.at("kind").is_string())
    throw ConfigError("model: missing 'kind'");
  cfg.kind = jm.at("kind").get<std::string>();
  static const std::vector<std::string> kinds = {
      "d2_trig",     "d2_rational",  "xxz_trig",    "xxx_rational",
      "xxx_reduced", "xxz_periodic", "xxx_periodic"};
  if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
    throw ConfigError("model: unknown kind '" + cfg.kind + "'");
  if (jm.contains("sites"))
    cfg.sites = static_cast<int>(need_number(jm, "sites", "model"));
  if (cfg.sites < 1) throw ConfigError("model: sites must be >= 1");
  if (kind_is_trig(cfg.kind)) {
    cfg.eta = need_number(jm, "eta", "model");
    if (cfg.eta <= 0.0) throw ConfigError("model: eta must be positive");
  } else {
    cfg.eta = jm.contains("eta") ? need_number(jm, "eta", "model") : 0.5;
  }
  if (jm.contains("inhomogeneity")) {
    const njson& ji = jm.at("inhomogeneity");
    const std::string mode =
        ji.contains("mode") ? ji.at("mode").get<std::string>() : "none";
    if (mode == "imag_ladder") {
      const double step = need_number(ji, "step", "inhomogeneity");
      for (int k = 1; k <= cfg.sites; ++k)
        cfg.theta.push_back(Complex{0.0, step * k});
    } else if (mode == "list") {
      if (!ji.contains("values") || !ji.at("values").is_array())
        throw ConfigError("inhomogeneity: list mode needs 'values'");
      for (const njson& v : ji.at("values")) {
        if (!v.is_array() || v.size() != 2)
          throw ConfigError("inhomogeneity: values must be re/im pairs");
        cfg.theta.push_back(Complex{v[0].get<double>(), v[1].get<double>()});
      }
      if (static_cast<int>(cfg.theta.size()) != cfg.sites)
        throw ConfigError("inhomogeneity: need one value per site");
    } else if (mode != "none") {
      throw ConfigError("inhomogeneity: unknown mode '" + mode + "'");
    }
  }

  int forms = 0;
  if (j.contains("boundary") && j.at("boundary").is_object()) {
    const njson& jb = j.at("boundary");
    if (jb.contains("raw")) {
      ++forms;
      cfg.boundary_form = "raw";
      const njson& jr = jb.at("raw");
      if (!jr.contains("sigma"))
        throw ConfigError("boundary.raw: missing 'sigma'");
      cfg.chain.sig = read_raw_sector(jr.at("sigma"), "boundary.raw.sigma");
      if (jr.contains("tau")) {
        cfg.chain.tau = read_raw_sector(jr.at("tau"), "boundary.raw.tau");
        cfg.has_tau = true;
      }
    }
    if (jb.contains("hermitian")) {
      ++forms;
      cfg.boundary_form = "hermitian";
      const njson& jh = jb.at("hermitian");
      if (!jh.contains("sigma"))
        throw ConfigError("boundary.hermitian: missing 'sigma'");
      cfg.chain.sig = read_hermitian_sector(jh.at("sigma"), cfg.eta,
                                            "boundary.hermitian.sigma");
      if (jh.contains("tau")) {
        cfg.chain.tau = read_hermitian_sector(jh.at("tau"), cfg.eta,
                                              "boundary.hermitian.tau");
        cfg.has_tau = true;
      }
    }
    if (jb.contains("fields")) {
      ++forms;
      cfg.boundary_form = "fields";
      const njson& jf = jb.at("fields");
      BoundaryFields f;
      f.hp1 = need_complex(jf, "h1p", "boundary.fields");
      f.hm1 = need_complex(jf, "h1m", "boundary.fields");
      f.hz1 = need_complex(jf, "h1z", "boundary.fields");
      f.hpN = need_complex(jf, "hNp", "boundary.fields");
      f.hmN = need_complex(jf, "hNm", "boundary.fields");
      f.hzN = need_complex(jf, "hNz", "boundary.fields");
      cfg.chain.sig = xxz_boundary_from_fields(cfg.eta, f);
    }
    if (jb.contains("xxx")) {
      ++forms;
      cfg.boundary_form = "xxx";
      cfg.red = read_xxx_triple(jb.at("xxx"), "boundary.xxx");
    }
    if (jb.contains("xxx_pair")) {
      ++forms;
      cfg.boundary_form = "xxx_pair";
      const njson& jp = jb.at("xxx_pair");
      if (!jp.contains("a") || !jp.contains("b"))
        throw ConfigError("boundary.xxx_pair: needs 'a' and 'b'");
      cfg.red = read_xxx_triple(jp.at("a"), "boundary.xxx_pair.a");
      cfg.red_b = read_xxx_triple(jp.at("b"), "boundary.xxx_pair.b");
    }
  }
  if (forms > 1)
    throw ConfigError("boundary: supply exactly one parametrization");
  if (forms == 0 && !kind_is_periodic(cfg.kind))
    throw ConfigError("boundary: required for open-chain kinds");
  if (cfg.kind == "xxx_reduced" && cfg.boundary_form != "xxx")
    throw ConfigError("boundary: xxx_reduced takes the (p, q, xi) triple");

  if (j.contains("solver") && j.at("solver").is_object()) {
    const njson& js = j.at("solver");
    if (js.contains("seed"))
      cfg.seed = static_cast<std::uint64_t>(need_number(js, "seed", "solver"));
    if (js.contains("tolerance"))
      cfg.tol = need_number(js, "tolerance", "solver");
    if (js.contains("class_tol"))
      cfg.class_tol = need_number(js, "class_tol", "solver");
    if (js.contains("dense_cap"))
      cfg.dense_cap =
          static_cast<long>(need_number(js, "dense_cap", "solver"));
    if (js.contains("fault_injection"))
      cfg.fault = js.at("fault_injection").get<bool>();
    if (js.contains("spectrum"))
      cfg.spectrum_mode = js.at("spectrum").get<std::string>();
  }
  if (seed_override) cfg.seed = *seed_override;
  if (tol_override) cfg.tol = *tol_override;
  if (cfg.tol <= 0.0) throw ConfigError("solver: tolerance must be positive");
  if (cfg.spectrum_mode != "auto" && cfg.spectrum_mode != "full" &&
      cfg.spectrum_mode != "ground")
    throw ConfigError("solver: spectrum must be full, ground, or auto");

  if (j.contains("output") && j.at("output").is_object()) {
    const njson& jo = j.at("output");
    if (jo.contains("csv")) cfg.csv_path = jo.at("csv").get<std::string>();
    if (jo.contains("record"))
      cfg.record_path = jo.at("record").get<std::string>();
  }

  if (j.contains("scan") && j.at("scan").is_object()) {
    const njson& js = j.at("scan");
    if (js.contains("quantity"))
      cfg.scan_quantity = js.at("quantity").get<std::string>();
    if (js.contains("backend"))
      cfg.scan_backend = js.at("backend").get<std::string>();
    if (js.contains("fit")) cfg.scan_fit = js.at("fit").get<std::string>();
    if (js.contains("sites")) {
      for (const njson& v : js.at("sites"))
        cfg.scan_sites.push_back(v.get<int>());
    }
  }

  // echo with the effective overrides folded in, so a re-run of the echo
  // reproduces this run exactly
  cfg.echo = j;
  cfg.echo["solver"]["seed"] = cfg.seed;
  cfg.echo["solver"]["tolerance"] = cfg.tol;
  return cfg;
}

// ---------------------------------------------------------------------------
// Output plumbing

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + tmp);
    out << content;
    if (!out) throw ConfigError("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("cannot move into place: " + path);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += '"';
  return out;
}

struct RecordWriter {
  njson record;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  RecordWriter(const std::string& command, const RunConfig& cfg) {
    record["command"] = command;
    record["version"] = kVersion;
    record["config"] = cfg.echo;
    record["outputs"] = njson::object();
    record["residuals"] = njson::object();
  }

  void finish(const RunConfig& cfg) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    record["timings"] = {{"total_ms", ms}};
    const std::string text = record.dump(2) + "\n";
    if (!cfg.record_path.empty())
      atomic_write(cfg.record_path, text);
    else
      std::fputs(text.c_str(), stdout);
  }
};

ModelKind chain_kind(const RunConfig& cfg) {
  if (cfg.kind == "d2_trig") return ModelKind::D2Trig;
  if (cfg.kind == "d2_rational") return ModelKind::D2Rational;
  if (cfg.kind == "xxz_trig" || cfg.kind == "xxz_periodic")
    return ModelKind::XXZTrig;
  return ModelKind::XXXRational;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(RunConfig& cfg, RecordWriter& rw) {
  std::mt19937_64 rng(cfg.seed);
  auto draw = [&] { return random_complex(rng, -0.8, 0.8, -0.8, 0.8); };
  std::vector<std::pair<std::string, double>> checks;
  auto add = [&](const std::string& name, double r) {
    checks.emplace_back(name, r);
  };

  const ModelKind ck = chain_kind(cfg);
  const bool d2 = kind_is_d2(cfg.kind);
  const bool rational = is_rational(ck);
  const ModelKind sk = rational ? ModelKind::XXXRational : ModelKind::XXZTrig;
  const double eta = cfg.eta;
  const int reps = 3;

  for (int i = 0; i < reps; ++i) {
    Complex u = draw(), v = draw();
    if (cfg.fault && !d2) {
      // corrupted eta in the middle factor; the suite must catch it
      const int dloc = local_dim(ck);
      ChainGeometry g{3, dloc, {}};
      const Matrix r12 = embed(r_matrix(ck, u - v, eta), {0, 1}, g);
      const Matrix r13 = embed(r_matrix(ck, u, eta * 1.001), {0, 2}, g);
      const Matrix r23 = embed(r_matrix(ck, v, eta), {1, 2}, g);
      add("ybe", rel_residual(r12 * r13 * r23, r23 * r13 * r12));
    } else {
      add("ybe", verify_ybe(ck, eta, u, v));
    }
    add("r_properties", verify_r_properties(ck, eta, u).worst());
    if (d2) {
      add("ybe_factor", verify_ybe(sk, eta, u, v));
      add("r_properties_factor", verify_r_properties(sk, eta, u).worst());
    }
  }

  if (!kind_is_periodic(cfg.kind)) {
    for (int i = 0; i < reps; ++i) {
      const Complex u = draw(), v = draw();
      if (cfg.kind == "xxx_reduced") {
        KFun kf = [&](Complex w) {
          return k_matrix_xxx_reduced(KSide::Reflection, w, cfg.red);
        };
        KFun kbf = [&](Complex w) {
          return k_matrix_xxx_reduced(KSide::Dual, w, cfg.red);
        };
        add("reflection", verify_reflection(sk, eta, u, v, kf));
        add("dual_reflection", verify_dual_reflection(sk, eta, u, v, kbf));
      } else if (d2) {
        KFun kf = [&](Complex w) {
          return k_matrix(ck, KSide::Reflection, w, eta, cfg.chain);
        };
        KFun kbf = [&](Complex w) {
          return k_matrix(ck, KSide::Dual, w, eta, cfg.chain);
        };
        add("reflection", verify_reflection(ck, eta, u, v, kf));
        add("dual_reflection", verify_dual_reflection(ck, eta, u, v, kbf));
        KFun kfs = [&](Complex w) {
          return k_matrix_sector(sk, KSide::Reflection, w, eta, cfg.chain.sig);
        };
        KFun kbfs = [&](Complex w) {
          return k_matrix_sector(sk, KSide::Dual, w, eta, cfg.chain.sig);
        };
        add("reflection_factor", verify_reflection(sk, eta, u, v, kfs));
        add("dual_reflection_factor",
            verify_dual_reflection(sk, eta, u, v, kbfs));
      } else {
        KFun kf = [&](Complex w) {
          return k_matrix_sector(sk, KSide::Reflection, w, eta, cfg.chain.sig);
        };
        KFun kbf = [&](Complex w) {
          return k_matrix_sector(sk, KSide::Dual, w, eta, cfg.chain.sig);
        };
        add("reflection", verify_reflection(sk, eta, u, v, kf));
        add("dual_reflection", verify_dual_reflection(sk, eta, u, v, kbf));
      }
    }
  }

  if (!rational) {
    // degenerate-point fusion: the projector collapses the staggered product
    ChainGeometry g3{3, 2, {}};
    const Matrix p21 = embed(fusion_projector(eta, true), {0, 1}, g3);
    for (int i = 0; i < reps; ++i) {
      const Complex u = draw();
      const Complex scal = std::sinh(0.5 * u + Complex{2.0 * eta, 0.0}) *
                           std::sinh(0.5 * u - Complex{2.0 * eta, 0.0});
      const Matrix r13 = embed(r_matrix(ModelKind::XXZTrig, u, eta), {0, 2}, g3);
      const Matrix r23 = embed(
          r_matrix(ModelKind::XXZTrig, u + 4.0 * eta, eta), {1, 2}, g3);
      add("fusion", rel_residual(p21 * r13 * r23 * p21, scal * p21));
    }
  }

  if (d2) {
    for (int i = 0; i < reps; ++i) {
      const Complex u = draw();
      add("factorization_r", verify_factorization_r(rational, eta, u));
      add("factorization_k",
          verify_factorization_k(rational, KSide::Reflection, eta, u,
                                 cfg.chain));
      add("factorization_k_dual",
          verify_factorization_k(rational, KSide::Dual, eta, u, cfg.chain));
    }
    for (int n = 1; n <= 2; ++n) {
      std::vector<Complex> th(n);
      for (auto& t : th) t = 0.3 * draw();
      const Complex u = draw();
      if (cfg.fault && n == 2) {
        // corrupted eta in one factor chain of the product
        const Matrix t_chain =
            transfer_dense(d2_transfer_model(ck, eta, th, cfg.chain), u);
        const Matrix t_plus = transfer_dense(
            sector_transfer_model(sk, eta * 1.001, th, cfg.chain.sig), u);
        const Matrix t_minus = transfer_dense(
            sector_transfer_model(sk, eta, th, cfg.chain.tau), u);
        double scale = rational ? 1.0 : 16.0;
        const Matrix g = s_conjugator(n);
        const Matrix pi = interleaver(n);
        const Matrix built = scale * g * pi * kron(t_plus, t_minus) *
                             pi.inverse() * g.inverse();
        add("transfer_factorization_n2", rel_residual(t_chain, built));
      } else {
        add("transfer_factorization_n" + std::to_string(n),
            verify_transfer_factorization(ck, eta, th, cfg.chain, u));
      }
    }
  }

  if (!kind_is_periodic(cfg.kind)) {
    const int n = d2 ? 2 : 3;
    std::vector<Complex> th(n);
    for (auto& t : th) t = 0.3 * draw();
    TransferModel tm =
        cfg.kind == "xxx_reduced"
            ? reduced_transfer_model(th, cfg.red)
            : (d2 ? d2_transfer_model(ck, eta, th, cfg.chain)
                  : sector_transfer_model(sk, eta, th, cfg.chain.sig));
    const Complex u = draw(), v = draw();
    const Matrix tu = transfer_dense(tm, u);
    const Matrix tv = transfer_dense(tm, v);
    add("commutativity", rel_residual(tu * tv, tv * tu));
    const Complex ucross = rational ? -u - 1.0 : 4.0 * eta - u;
    add("crossing", rel_residual(tu, transfer_dense(tm, ucross)));
  }

  double worst = 0.0;
  std::string first_fail;
  njson jchecks = njson::array();
  for (const auto& [name, r] : checks) {
    const bool pass = r < cfg.tol;
    if (!pass && first_fail.empty()) first_fail = name;
    worst = std::max(worst, r);
    jchecks.push_back({{"name", name}, {"residual", r}, {"pass", pass}});
  }
  rw.record["outputs"]["checks"] = jchecks;
  rw.record["outputs"]["count"] = checks.size();
  rw.record["outputs"]["pass"] = first_fail.empty();
  rw.record["residuals"]["max"] = worst;
  rw.record["residuals"]["tolerance"] = cfg.tol;

  if (!first_fail.empty()) {
    std::fprintf(stderr, "verify: FAILED identity '%s' (max residual %.3e)\n",
                 first_fail.c_str(), worst);
    return 1;
  }
  std::fprintf(stderr, "verify: %zu checks passed, max residual %.3e\n", checks.size(),
              worst);
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum

HamiltonianBuild build_hamiltonian(const RunConfig& cfg) {
  if (cfg.kind == "d2_trig")
    return d2_hamiltonian_trig(cfg.eta, cfg.sites, cfg.chain);
  if (cfg.kind == "d2_rational")
    return d2_hamiltonian_xxx(cfg.sites, cfg.chain);
  if (cfg.kind == "xxz_trig")
    return sector_hamiltonian_trig(cfg.eta, cfg.sites, cfg.chain.sig);
  if (cfg.kind == "xxx_rational")
    return sector_hamiltonian_xxx(cfg.sites, cfg.chain.sig);
  if (cfg.kind == "xxx_reduced")
    return reduced_hamiltonian_xxx(cfg.sites, cfg.red);
  if (cfg.kind == "xxz_periodic")
    return periodic_sector_trig(cfg.eta, cfg.sites);
  return periodic_xxx_hamiltonian(cfg.sites);
}

bool boundary_guarantees_hermitian(const RunConfig& cfg) {
  if (kind_is_periodic(cfg.kind) || cfg.kind == "xxx_reduced") return true;
  return cfg.boundary_form == "hermitian" || cfg.boundary_form == "fields";
}

int cmd_spectrum(RunConfig& cfg, RecordWriter& rw) {
  if (cfg.csv_path.empty())
    throw ConfigError("output.csv is required for spectrum");
  const HamiltonianBuild hb = build_hamiltonian(cfg);
  const long dim = hb.dim();
  std::string mode = cfg.spectrum_mode;
  if (mode == "auto") mode = dim <= cfg.dense_cap ? "full" : "ground";
  if (mode == "full" && dim > cfg.dense_cap)
    throw ConfigError("spectrum: dimension " + std::to_string(dim) +
                      " exceeds the dense cap " +
                      std::to_string(cfg.dense_cap));
  if (mode == "ground" && dim > cfg.dense_cap &&
      !boundary_guarantees_hermitian(cfg))
    throw ConfigError(
        "spectrum: iterative ground state needs a hermitian parametrization "
        "above the dense cap");

  std::vector<Complex> levels;
  if (mode == "full") {
    const Matrix h = hb.dense();
    if (rel_residual(Matrix(h.adjoint()), h) < 1e-10) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      for (long i = 0; i < dim; ++i)
        levels.push_back(Complex{es.eigenvalues()(i), 0.0});
    } else {
      Eigen::ComplexEigenSolver<Matrix> es(h);
      for (long i = 0; i < dim; ++i) levels.push_back(es.eigenvalues()(i));
      std::sort(levels.begin(), levels.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
      });
    }
  } else {
    std::mt19937_64 rng(cfg.seed);
    levels.push_back(Complex{ground_state(hb, rng, cfg.dense_cap).value, 0.0});
  }

  std::ostringstream csv;
  csv << "index,re,im\n";
  for (size_t i = 0; i < levels.size(); ++i)
    csv << i << ',' << fmt17(levels[i].real()) << ','
        << fmt17(levels[i].imag()) << '\n';
  atomic_write(cfg.csv_path, csv.str());

  rw.record["outputs"]["dim"] = dim;
  rw.record["outputs"]["mode"] = mode;
  rw.record["outputs"]["rows"] = levels.size();
  rw.record["outputs"]["ground_energy"] = levels.front().real();
  rw.record["outputs"]["csv"] = cfg.csv_path;
  std::fprintf(stderr, "spectrum: %zu level%s written to %s (dim %ld)\n", levels.size(),
              levels.size() == 1 ? "" : "s", cfg.csv_path.c_str(), dim);
  return 0;
}

// ---------------------------------------------------------------------------
// roots

std::string root_class(Complex z, double eta, const DerivedBoundary& der,
                       double ctol) {
  std::vector<double> pi_heights, origin_heights;
  for (Complex a : {der.a1, der.a1p}) {
    const double h = 2.0 * eta - a.real();
    if (h > 0.0 && h < 2.0 * eta) pi_heights.push_back(h);
  }
  for (Complex a : {der.a2 - II * PI, der.a2p - II * PI}) {
    const double h = 2.0 * eta - a.real();
    if (h > 0.0 && h < 2.0 * eta) origin_heights.push_back(h);
  }
  const double margin = std::max(0.05, 10.0 * ctol);
  const double y = std::abs(z.imag());
  if (y <= ctol) return "real";
  if (std::abs(z.real()) <= 10.0 * ctol) {
    for (double h : origin_heights)
      if (std::abs(y - h) <= margin) return "origin_string";
    return "other";
  }
  if (std::abs(std::abs(z.real()) - PI) <= 10.0 * ctol) {
    for (double h : pi_heights)
      if (std::abs(y - h) <= margin) return "pi_string";
    if (y > 2.0 * eta) return "additional";
  }
  return "other";
}

int cmd_roots(RunConfig& cfg, RecordWriter& rw) {
  if (cfg.kind != "xxz_trig")
    throw ConfigError("roots: only the open trigonometric sector is supported");
  if (cfg.csv_path.empty())
    throw ConfigError("output.csv is required for roots");
  if (cfg.sites > kScanMaxSites)
    throw ConfigError("roots: sites exceeds the spin-1/2 cap");

  const XxzBoundary& b = cfg.chain.sig;
  const HamiltonianBuild hb = sector_hamiltonian_trig(cfg.eta, cfg.sites, b);
  std::mt19937_64 rng(cfg.seed);
  const EigenPair ground = ground_state(hb, rng, cfg.dense_cap);

  const std::vector<Complex> theta0(cfg.sites, Complex{0.0, 0.0});
  const bool inhom = !cfg.theta.empty();
  TransferModel tm = sector_transfer_model(ModelKind::XXZTrig, cfg.eta,
                                           inhom ? cfg.theta : theta0, b);
  Vector vec = ground.vec;
  if (inhom) {
    if (hb.dim() > cfg.dense_cap)
      throw ConfigError("roots: inhomogeneous runs need dim under the cap");
    // eigenvector continuously connected to the homogeneous ground state,
    // picked by overlap at a generic reference point
    const Complex u0 = cfg.eta * Complex{0.6, 0.2};
    Eigen::ComplexEigenSolver<Matrix> es(transfer_dense(tm, u0));
    long best = 0;
    double best_ov = -1.0;
    for (long j = 0; j < es.eigenvectors().cols(); ++j) {
      const Complex ov = ground.vec.adjoint() * es.eigenvectors().col(j);
      const double a = std::abs(ov) / es.eigenvectors().col(j).norm();
      if (a > best_ov) {
        best_ov = a;
        best = j;
      }
    }
    vec = es.eigenvectors().col(best);
    rw.record["outputs"]["reference_overlap"] = best_ov;
  }

  const auto sampler = [&](Complex u) { return transfer_eigenvalue(tm, u, vec); };
  const ZeroRootForm zr =
      extract_zero_roots(sampler, PolyBasis::Trig, cfg.sites, cfg.eta);

  const DerivedBoundary der = derived_boundary(b);
  std::ostringstream csv;
  csv << "re,im,class\n";
  std::map<std::string, int> counts;
  for (const Complex& z : zr.roots) {
    const std::string cls = root_class(z, cfg.eta, der, cfg.class_tol);
    ++counts[cls];
    csv << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << cls << '\n';
  }
  atomic_write(cfg.csv_path, csv.str());

  rw.record["outputs"]["roots"] = zr.roots.size();
  njson jc = njson::object();
  for (const auto& [k, v] : counts) jc[k] = v;
  rw.record["outputs"]["classes"] = jc;
  rw.record["outputs"]["ground_energy"] = ground.value;
  rw.record["outputs"]["csv"] = cfg.csv_path;

  int code = 0;
  if (!inhom) {
    const Complex er = sector_energy_from_roots_trig(cfg.eta, b, zr.roots);
    const double resid = std::abs(er - Complex{ground.value, 0.0});
    rw.record["outputs"]["root_energy"] = er.real();
    rw.record["residuals"]["energy"] = resid;
    if (resid > 1e-8) {
      std::fprintf(stderr,
                   "roots: energy cross-check failed (|diff| = %.3e)\n", resid);
      code = 1;
    }
  }
  std::fprintf(stderr, "roots: %zu roots written to %s\n", zr.roots.size(),
              cfg.csv_path.c_str());
  return code;
}

// ---------------------------------------------------------------------------
// thermo

njson breakdown_json(const SurfaceEnergyResult& r) {
  njson out = njson::object();
  for (const auto& [name, value] : r.breakdown) out[name] = to_json(value);
  return out;
}

int cmd_thermo(RunConfig& cfg, RecordWriter& rw) {
  SurfaceEnergyResult res;
  njson extra = njson::object();
  if (cfg.kind == "xxz_trig") {
    const XxzBoundary& b = cfg.chain.sig;
    if (!is_hermitian_family(b, cfg.eta))
      throw ConfigError("thermo: boundary is not in the hermitian family");
    const DerivedBoundary der = derived_boundary(b);
    res = surface_energy_xxz(cfg.eta, der, b.sp);
    extra["ground_energy"] =
        ground_energy_trig(cfg.sites, cfg.eta, der, b.sp);
  } else if (cfg.kind == "d2_trig") {
    if (!cfg.has_tau)
      throw ConfigError("thermo: d2_trig needs sigma and tau boundaries");
    for (const XxzBoundary* s : {&cfg.chain.sig, &cfg.chain.tau})
      if (!is_hermitian_family(*s, cfg.eta))
        throw ConfigError("thermo: boundary is not in the hermitian family");
    res = surface_energy_d2_trig(cfg.eta, derived_boundary(cfg.chain.sig),
                                 derived_boundary(cfg.chain.tau),
                                 cfg.chain.sig.sp, cfg.chain.tau.sp);
  } else if (cfg.kind == "xxx_reduced" && cfg.boundary_form == "xxx") {
    res = surface_energy_xxx(cfg.red.p, cfg.red.q, cfg.red.xi);
    extra["ground_energy"] = xxx_ground_energy(cfg.sites, cfg.red);
  } else if (cfg.kind == "d2_rational" && cfg.boundary_form == "xxx_pair") {
    res = surface_energy_d2_xxx(cfg.red, cfg.red_b);
  } else {
    throw ConfigError("thermo: unsupported model/boundary combination");
  }

  Complex sum{0.0, 0.0};
  for (const auto& [name, value] : res.breakdown) sum += value;
  rw.record["outputs"]["value"] = res.value;
  rw.record["outputs"]["in_regime"] = res.in_regime;
  rw.record["outputs"]["breakdown"] = breakdown_json(res);
  rw.record["outputs"]["echo"] = res.echo;
  for (auto it = extra.begin(); it != extra.end(); ++it)
    rw.record["outputs"][it.key()] = it.value();
  rw.record["residuals"]["breakdown_sum"] = std::abs(sum - Complex{res.value, 0.0});
  if (!res.in_regime)
    std::fprintf(stderr, "thermo: warning: parameters outside the derivation "
                         "regime; value is an analytic continuation\n");
  std::fprintf(stderr, "thermo: value %.12g (in_regime=%s)\n", res.value,
              res.in_regime ? "true" : "false");
  return 0;
}

// ---------------------------------------------------------------------------
// scan

int cmd_scan(RunConfig& cfg, RecordWriter& rw) {
  if (cfg.csv_path.empty())
    throw ConfigError("output.csv is required for scan");
  ScanSpec spec;
  if (cfg.scan_quantity == "ground_energy")
    spec.quantity = ScanQuantity::GroundEnergy;
  else if (cfg.scan_quantity == "surface_energy")
    spec.quantity = ScanQuantity::SurfaceEnergy;
  else if (cfg.scan_quantity == "pair_position")
    spec.quantity = ScanQuantity::AdditionalRootPosition;
  else
    throw ConfigError("scan: quantity must be ground_energy, surface_energy, "
                      "or pair_position");
  if (cfg.scan_backend == "dense")
    spec.backend = ScanBackend::Dense;
  else if (cfg.scan_backend == "zero_roots")
    spec.backend = ScanBackend::ZeroRoots;
  else
    throw ConfigError("scan: backend must be dense or zero_roots");

  if (cfg.kind == "d2_rational")
    throw ConfigError("scan: d2_rational is not a scan kind; use xxx_reduced");
  spec.kind = chain_kind(cfg);
  spec.periodic = kind_is_periodic(cfg.kind);
  spec.eta = cfg.eta;
  spec.sector = cfg.chain.sig;
  spec.chain = cfg.chain;
  spec.reduced = cfg.red;
  spec.sites = cfg.scan_sites;
  if (cfg.kind == "d2_trig" && !cfg.has_tau)
    throw ConfigError("scan: d2_trig needs sigma and tau boundaries");

  if (spec.sites.empty()) throw ConfigError("scan: sites list is empty");
  for (size_t i = 0; i < spec.sites.size(); ++i) {
    if (spec.sites[i] < 1 || spec.sites[i] > kScanMaxSites)
      throw ConfigError("scan: sites must lie in 1.." +
                        std::to_string(kScanMaxSites));
    if (i > 0 && spec.sites[i] <= spec.sites[i - 1])
      throw ConfigError("scan: sites must be strictly increasing");
  }

  const ScanTable table = run_scan(spec);

  std::ostringstream csv;
  csv << "sites,value,ok,note\n";
  for (const ScanPoint& p : table)
    csv << p.sites << ',' << fmt17(p.value) << ',' << (p.ok ? 1 : 0) << ','
        << csv_quote(p.note) << '\n';
  atomic_write(cfg.csv_path, csv.str());

  int ok = 0;
  njson jpoints = njson::array();
  for (const ScanPoint& p : table) {
    ok += p.ok ? 1 : 0;
    jpoints.push_back({{"sites", p.sites},
                       {"value", p.value},
                       {"ok", p.ok},
                       {"note", p.note}});
  }
  rw.record["outputs"]["points"] = jpoints;
  rw.record["outputs"]["csv"] = cfg.csv_path;

  if (cfg.scan_fit != "none") {
    FitResult fr;
    njson jf;
    if (cfg.scan_fit == "linear") {
      fr = fit_linear(table);
      jf = {{"model", "linear"},
            {"slope", fr.slope},
            {"intercept", fr.intercept}};
    } else if (cfg.scan_fit == "exponential") {
      fr = fit_exponential(table);
      jf = {{"model", "exponential"},
            {"amplitude", fr.amp},
            {"rate", fr.rate},
            {"limit", fr.limit}};
    } else {
      throw ConfigError("scan: fit must be none, linear, or exponential");
    }
    jf["residual_norm"] = fr.residual_norm;
    njson jcov = njson::array();
    for (long i = 0; i < fr.covariance.rows(); ++i) {
      njson row = njson::array();
      for (long j = 0; j < fr.covariance.cols(); ++j)
        row.push_back(fr.covariance(i, j));
      jcov.push_back(row);
    }
    jf["covariance"] = jcov;
    rw.record["outputs"]["fit"] = jf;
    std::fprintf(stderr, "scan: fit %s residual %.3e\n", cfg.scan_fit.c_str(),
                fr.residual_norm);
  }

  std::fprintf(stderr, "scan: %zu points (%d ok) written to %s\n", table.size(), ok,
              cfg.csv_path.c_str());
  if (ok != static_cast<int>(table.size())) {
    std::fprintf(stderr, "scan: %zu point(s) failed\n", table.size() - ok);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D2(1) spin chain toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_val = 0;
  double tol_val = 0.0;
  bool seed_set = false, tol_set = false;

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"verify", "run the identity suite at seeded random points"},
      {"spectrum", "diagonalize a chain and write the level CSV"},
      {"roots", "extract and classify transfer-eigenvalue zeros"},
      {"thermo", "closed-form surface and ground energies"},
      {"scan", "finite-size scans and trend fits"}};
  for (const auto& [name, desc] : subs) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_option("config", config_path, "path to the JSON config")
        ->required();
    s->add_option("--seed", seed_val, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
    s->add_option("--tol", tol_val, "override the config tolerance")
        ->each([&](const std::string&) { tol_set = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = parse_config(
        config_path,
        seed_set ? std::optional<std::uint64_t>(seed_val) : std::nullopt,
        tol_set ? std::optional<double>(tol_val) : std::nullopt);
    RecordWriter rw(command, cfg);
    int code = 0;
    if (command == "verify")
      code = cmd_verify(cfg, rw);
    else if (command == "spectrum")
      code = cmd_spectrum(cfg, rw);
    else if (command == "roots")
      code = cmd_roots(cfg, rw);
    else if (command == "thermo")
      code = cmd_thermo(cfg, rw);
    else
      code = cmd_scan(cfg, rw);
    rw.finish(cfg);
    return code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
