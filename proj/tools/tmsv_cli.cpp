// Command-line front end: zeta sweeps of the CHSH and parity observables,
// Wigner grid dumps, and the cross-module verification suite. All numeric
// output is emitted with 12 significant digits via std::to_chars, so a given
// configuration always produces identical bytes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmsv/bell_polarization.hpp"
#include "tmsv/chsh_optimizer.hpp"
#include "tmsv/format.hpp"
#include "tmsv/tmsv_state.hpp"
#include "tmsv/verify.hpp"
#include "tmsv/wigner_phase_space.hpp"

using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::vector<double> zetas;
  double tail_tol = 1e-10;
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 12345;
};

void write_file(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output path: " + path);
  f << contents;
  if (!f) throw std::runtime_error("failed writing output path: " + path);
}

json config_json(const CommonOpts& o, const std::string& command) {
  json cfg;
  cfg["command"] = command;
  cfg["zeta_values"] = o.zetas;
  cfg["tail_tolerance"] = o.tail_tol;
  cfg["seed"] = o.seed;
  return cfg;
}

struct ChshRow {
  double zeta = 0.0;
  int cutoff = 2;
  double tail_mass = 0.0;
  bool degenerate = false;
  double s_canonical = 0.0;
  double s_optimized = 0.0;
  double normalizer = 0.0;
  double mean_pol_a = 0.0;
  double mean_pol_b = 0.0;
};

int cmd_sweep_chsh(const CommonOpts& o) {
  using namespace tmsv;
  std::vector<ChshRow> rows;
  for (double z : o.zetas) {
    ChshRow row;
    row.zeta = z;
    const SqueezingParameter zeta(z);
    const TruncationSpec trunc = choose_cutoff(zeta, o.tail_tol);
    row.cutoff = trunc.cutoff;
    row.tail_mass = schmidt_profile(zeta, trunc).tail_mass;
    const FourModeState psi = build_state_schmidt(zeta, trunc);
    row.mean_pol_a = mean_polarization(psi, Channel::A);
    row.mean_pol_b = mean_polarization(psi, Channel::B);
    if (z == 0.0) {
      row.degenerate = true;
    } else {
      const Correlator corr(psi);
      row.normalizer = corr.components(0.0, 0.0).normalizer;
      row.s_canonical = corr.chsh(canonical_angles()).s_value;
      const auto e_src = [&corr](double d, double dp) {
        return corr.normalized_E(d, dp);
      };
      row.s_optimized = optimize(e_src).best.s_value;
    }
    rows.push_back(row);
  }

  std::ostringstream out;
  if (o.format == "csv") {
    out << "zeta,cutoff,tail_mass,S_canonical,S_optimized,normalizer,"
           "mean_polarization_A,mean_polarization_B\n";
    for (const auto& r : rows) {
      out << format_number(r.zeta) << ',' << r.cutoff << ','
          << format_number(r.tail_mass) << ',';
      if (r.degenerate)
        out << "degenerate,degenerate,degenerate,";
      else
        out << format_number(r.s_canonical) << ','
            << format_number(r.s_optimized) << ','
            << format_number(r.normalizer) << ',';
      out << format_number(r.mean_pol_a) << ',' << format_number(r.mean_pol_b)
          << '\n';
    }
  } else {
    json doc;
    doc["config"] = config_json(o, "sweep-chsh");
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      json j;
      j["zeta"] = r.zeta;
      j["cutoff"] = r.cutoff;
      j["tail_mass"] = r.tail_mass;
      j["degenerate"] = r.degenerate;
      j["S_canonical"] = r.degenerate ? json(nullptr) : json(r.s_canonical);
      j["S_optimized"] = r.degenerate ? json(nullptr) : json(r.s_optimized);
      j["normalizer"] = r.degenerate ? json(nullptr) : json(r.normalizer);
      j["mean_polarization_A"] = r.mean_pol_a;
      j["mean_polarization_B"] = r.mean_pol_b;
      doc["rows"].push_back(j);
    }
    out << doc.dump(2) << '\n';
  }
  write_file(o.out_path, out.str());
  return 0;
}

int cmd_sweep_parity(const CommonOpts& o) {
  using namespace tmsv;
  std::ostringstream csv;
  csv << "zeta,parity_numeric,parity_closed_form,abs_error\n";
  json rows = json::array();
  for (double z : o.zetas) {
    const SqueezingParameter zeta(z);
    const TruncationSpec trunc = choose_cutoff(zeta, o.tail_tol);
    const FourModeState psi = build_state_schmidt(zeta, trunc);
    const double numeric = parity_expectation(psi);
    const double closed = parity_closed_form(z);
    const double err = std::abs(numeric - closed);
    csv << format_number(z) << ',' << format_number(numeric) << ','
        << format_number(closed) << ',' << format_number(err) << '\n';
    json j;
    j["zeta"] = z;
    j["parity_numeric"] = numeric;
    j["parity_closed_form"] = closed;
    j["abs_error"] = err;
    rows.push_back(j);
  }
  if (o.format == "csv") {
    write_file(o.out_path, csv.str());
  } else {
    json doc;
    doc["config"] = config_json(o, "sweep-parity");
    doc["rows"] = rows;
    write_file(o.out_path, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_wigner_grid(const CommonOpts& o, double half_width, int points) {
  using namespace tmsv;
  const double z = o.zetas.empty() ? 0.0 : o.zetas.front();
  const double l = half_width > 0.0 ? half_width
                                    : 4.0 * std::max(1.0, std::exp(z));
  const QuadratureGrid dump_grid(l, points);
  const int m = dump_grid.points_per_axis;
  const double h = 2.0 * l / (m - 1);

  std::ostringstream out;
  out << "q_A,p_A,q_B,p_B,W\n";
  double min_w = 1e300;
  for (int iq = 0; iq < m; ++iq)
    for (int ip = 0; ip < m; ++ip)
      for (int jq = 0; jq < m; ++jq)
        for (int jp = 0; jp < m; ++jp) {
          const double qa = -l + iq * h, pa = -l + ip * h;
          const double qb = -l + jq * h, pb = -l + jp * h;
          const double w = wigner_analytic(z, {cd{qa, pa}, cd{qb, pb}});
          min_w = std::min(min_w, w);
          out << format_number(qa) << ',' << format_number(pa) << ','
              << format_number(qb) << ',' << format_number(pb) << ','
              << format_number(w) << '\n';
        }
  // Normalization summary on a refined grid of the same family, so a coarse
  // dump still reports an accurate integral.
  const QuadratureGrid quad_grid(l, std::max(m, 65));
  const NormalizationResult nr = wigner_normalization(z, quad_grid);
  out << "# normalization=" << format_number(nr.integral)
      << " min_W=" << format_number(min_w)
      << (nr.narrow_grid_warning ? " warning=grid-too-narrow" : " ok") << '\n';
  write_file(o.out_path, out.str());
  return 0;
}

int cmd_verify(const CommonOpts& o, bool inject_kx_sign_flip) {
  tmsv::VerifyOptions vo;
  vo.tail_tolerance = o.tail_tol;
  vo.seed = o.seed;
  vo.inject_kx_sign_flip = inject_kx_sign_flip;
  const auto results = tmsv::run_verification(vo);
  int failures = 0;
  for (const auto& r : results) {
    std::printf("%-45s %s  measured=%s tolerance=%s\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL",
                tmsv::format_number(r.measured).c_str(),
                tmsv::format_number(r.tolerance).c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%d/%zu checks passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization Bell-correlation lab for product two-mode "
               "squeezed vacuum states"};
  app.require_subcommand(1);

  CommonOpts opts;
  double half_width = 0.0;
  int grid_points = 9;
  bool inject_flip = false;

  auto add_common = [&](CLI::App* sub, bool wants_zeta) {
    if (wants_zeta)
      sub->add_option("--zeta", opts.zetas, "Squeezing parameter (repeatable)");
    sub->add_option("--tail-tol", opts.tail_tol,
                    "Truncation tail tolerance (default 1e-10)");
    sub->add_option("--format", opts.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", opts.out_path, "Output path (default stdout)");
    sub->add_option("--seed", opts.seed, "Seed for random angle sampling");
  };

  CLI::App* chsh = app.add_subcommand(
      "sweep-chsh", "CHSH value at canonical and optimized angles per zeta");
  add_common(chsh, true);
  CLI::App* parity = app.add_subcommand(
      "sweep-parity", "Single-mode parity expectation vs its closed form");
  add_common(parity, true);
  CLI::App* wigner = app.add_subcommand(
      "wigner-grid", "Analytic Wigner values on a phase-space grid");
  add_common(wigner, true);
  wigner->add_option("--grid-half-width", half_width,
                     "Half-width L (default 4 max(1, e^zeta))");
  wigner->add_option("--grid-points", grid_points,
                     "Points per axis for the dump (default 9)");
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the cross-module invariant suite");
  add_common(verify, false);
  verify->add_flag("--inject-kx-sign-flip", inject_flip,
                   "Test hook: corrupt one K_x term and expect failures")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (chsh->parsed()) {
      if (opts.zetas.empty())
        throw std::runtime_error("sweep-chsh: at least one --zeta is required");
      return cmd_sweep_chsh(opts);
    }
    if (parity->parsed()) {
      if (opts.zetas.empty())
        throw std::runtime_error("sweep-parity: at least one --zeta is required");
      return cmd_sweep_parity(opts);
    }
    if (wigner->parsed()) return cmd_wigner_grid(opts, half_width, grid_points);
    if (verify->parsed()) return cmd_verify(opts, inject_flip);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
