// hso: experiment runner for the hypersingular operator laboratory.
//
// Subcommands map one-to-one onto library operations; the CLI adds no
// numerics of its own. Outputs are deterministic given the same options and
// seed: CSV bodies carry a sorted `# key=value` header, JSON is a single
// object with `config`, `results` and `metadata` keys. Files are written via
// a temporary and renamed, so partial outputs are never left behind.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hso/dyadic.hpp"
#include "hso/grid.hpp"
#include "hso/interpolation.hpp"
#include "hso/norms.hpp"
#include "hso/operators.hpp"
#include "hso/sparse_family.hpp"
#include "hso/version.hpp"
#include "hso/weights.hpp"

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::string tool;
  std::map<std::string, std::string> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> summary;

  std::string render_csv() const {
    std::ostringstream out;
    out << "# hso " << tool << " v" << hso::kVersion << "\n";
    for (const auto& [k, v] : config) out << "# " << k << "=" << v << "\n";
    for (const auto& [k, v] : summary) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << columns[c] << (c + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out << row[c] << (c + 1 < row.size() ? "," : "");
      out << "\n";
    }
    return out.str();
  }

  std::string render_json() const {
    json j;
    j["config"] = json::object();
    for (const auto& [k, v] : config) j["config"][k] = v;
    j["results"]["columns"] = columns;
    j["results"]["rows"] = rows;
    j["results"]["summary"] = json::object();
    for (const auto& [k, v] : summary) j["results"]["summary"][k] = v;
    j["metadata"]["tool"] = "hso " + tool;
    j["metadata"]["version"] = hso::kVersion;
    return j.dump(2) + "\n";
  }
};

// Writes atomically: a partial run never leaves a file behind.
void deliver(const Output& out, const std::string& path, const std::string& format) {
  std::string body = (format == "json") ? out.render_json() : out.render_csv();
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output path " + tmp.string());
    f << body;
  }
  std::filesystem::rename(tmp, target);
}

hso::RadialWeight parse_weight(const std::string& spec) {
  if (spec.rfind("power:", 0) == 0)
    return hso::RadialWeight::power(std::stod(spec.substr(6)));
  if (spec.rfind("table:", 0) == 0) {
    std::ifstream in(spec.substr(6));
    if (!in) throw std::runtime_error("cannot open weight table " + spec.substr(6));
    std::vector<double> r, w;
    double a, b;
    while (in >> a >> b) {
      r.push_back(a);
      w.push_back(b);
    }
    return hso::RadialWeight::tabulated(std::move(r), std::move(w));
  }
  throw std::runtime_error("weight spec must be power:<gamma> or table:<path>");
}

const char* class_name(hso::BoundClass c) {
  switch (c) {
    case hso::BoundClass::Strong: return "strong";
    case hso::BoundClass::WeakLine: return "weak";
    case hso::BoundClass::RestrictedEndpoint: return "restricted";
    case hso::BoundClass::Unbounded: return "unbounded";
  }
  return "?";
}

const char* verdict_name(hso::Verdict v) {
  switch (v) {
    case hso::Verdict::Bounded: return "bounded";
    case hso::Verdict::Unbounded: return "unbounded";
    case hso::Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Flat key=value or JSON config files, expanded into --key=value arguments
// that precede the explicit flags (explicit flags win via TakeLast).
std::vector<std::string> load_config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::vector<std::string> args;
  if (std::filesystem::path(path).extension() == ".json") {
    json j = json::parse(in);
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string v;
      if (it.value().is_string())
        v = it.value().get<std::string>();
      else if (it.value().is_boolean())
        v = it.value().get<bool>() ? "true" : "false";
      else
        v = num(it.value().get<double>());
      args.push_back("--" + it.key() + "=" + v);
    }
    return args;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + line);
    args.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
  }
  return args;
}

struct CommonOpts {
  std::string output;  // empty/- means stdout
  std::string format = "csv";
  bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--output,-o", common.output, "output path ('-' for stdout)");
  cmd->add_option("--format", common.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--dry-run", common.dry_run, "validate parameters, compute nothing");
}

int run_region(double t, const std::string& kind, int resolution, int n,
               double eta, double K, const CommonOpts& common) {
  double sigma = hso::critical_slope(n, t, eta, K);
  auto opkind = (kind == "maximal") ? hso::OperatorFamilyKind::Maximal
                                    : hso::OperatorFamilyKind::Singular;
  if (common.dry_run) return 0;

  Output out;
  out.tool = "region";
  out.config = {{"t", num(t)},   {"kind", kind},    {"resolution", num(resolution)},
                {"n", num(n)},   {"eta", num(eta)}, {"K", num(K)},
                {"sigma", num(sigma)}};
  out.columns = {"ip", "iq", "class"};
  for (const auto& [p, c] : hso::region_samples(sigma, opkind, resolution))
    out.rows.push_back({num(p.ip), num(p.iq), class_name(c)});
  auto [lineEnd, restEnd] = hso::region_endpoints(sigma);
  out.summary["endpoint_line"] = num(lineEnd.ip) + ":" + num(lineEnd.iq);
  out.summary["endpoint_restricted"] = num(restEnd.ip) + ":" + num(restEnd.iq);
  deliver(out, common.output, common.format);
  return 0;
}

int run_layer_norms(const std::string& family, double t, int jmin, int jmax,
                    const CommonOpts& common) {
  if (family != "carleson")
    throw std::invalid_argument("layer-norms: only --family carleson is supported");
  hso::ensure_admissible_disc_t(t);
  if (jmin < 0 || jmax < jmin + 2)
    throw std::invalid_argument("layer-norms: need jmax >= jmin + 2");
  if (common.dry_run) return 0;

  auto fam = hso::family_carleson(jmax, hso::DyadicSystem::Standard,
                                  hso::BoxMeasure::Exact);
  hso::LayerNormSeries l1{{}, {}, "L1->L1"}, li{{}, {}, "Linf->L1"};
  Output out;
  out.tool = "layer-norms";
  out.config = {{"family", family}, {"t", num(t)}, {"jmin", num(jmin)}, {"jmax", num(jmax)}};
  out.columns = {"j", "l1_to_l1", "linf_to_l1"};
  for (int j = jmin; j <= jmax; ++j) {
    double a = hso::op_norm_corner_layer(fam, j, t, hso::NormCorner::L1toL1);
    double b = hso::op_norm_corner_layer(fam, j, t, hso::NormCorner::LinfToL1);
    l1.layer.push_back(j);
    l1.value.push_back(a);
    li.layer.push_back(j);
    li.value.push_back(b);
    out.rows.push_back({num(j), num(a), num(b)});
  }
  auto f1 = hso::fit_layer_exponent(l1);
  auto f2 = hso::fit_layer_exponent(li);
  out.summary["fit_l1_slope"] = num(f1.slope);
  out.summary["fit_l1_intercept"] = num(f1.intercept);
  out.summary["fit_linf_slope"] = num(f2.slope);
  out.summary["fit_linf_intercept"] = num(f2.intercept);
  deliver(out, common.output, common.format);
  return 0;
}

int run_bourgain(double t, int jmax, bool explicit_rates, double beta1, double M1,
                 double beta2, double M2, const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  if (common.dry_run) return 0;
  Output out;
  out.tool = "bourgain";
  if (!explicit_rates) {
    auto fam = hso::family_carleson(jmax, hso::DyadicSystem::Standard,
                                    hso::BoxMeasure::Exact);
    hso::LayerNormSeries l1{{}, {}, "L1->L1"}, li{{}, {}, "Linf->L1"};
    for (int j = 2; j <= jmax; ++j) {
      l1.layer.push_back(j);
      l1.value.push_back(hso::op_norm_corner_layer(fam, j, t, hso::NormCorner::L1toL1));
      li.layer.push_back(j);
      li.value.push_back(hso::op_norm_corner_layer(fam, j, t, hso::NormCorner::LinfToL1));
    }
    auto f1 = hso::fit_layer_exponent(l1);
    auto f2 = hso::fit_layer_exponent(li);
    beta1 = f1.slope;
    M1 = std::exp2(f1.intercept);
    beta2 = -f2.slope;
    M2 = std::exp2(f2.intercept);
  }
  auto r = hso::bourgain_combine(beta1, M1, 1.0, 1.0, beta2, M2, INFINITY, 1.0);
  out.config = {{"t", num(t)},   {"jmax", num(jmax)},   {"beta1", num(beta1)},
                {"M1", num(M1)}, {"beta2", num(beta2)}, {"M2", num(M2)},
                {"from", explicit_rates ? "explicit" : "carleson-layers"}};
  out.columns = {"theta", "ip", "iq", "constant"};
  out.rows.push_back({num(r.theta), num(r.point.ip), num(r.point.iq), num(r.constant)});
  out.summary["target_ip"] = num(3.0 - 2.0 * t);
  deliver(out, common.output, common.format);
  return 0;
}

int run_maximal(double t, int levels, int cells, int ntheta, int max_level,
                const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  if (max_level < 0) max_level = levels - 1;
  auto grid = hso::make_dyadic_polar_grid(levels, cells, ntheta);
  hso::ensure_box_resolution(*grid, hso::DyadicSystem::Standard, max_level);
  if (common.dry_run) return 0;

  auto m1 = hso::apply_maximal(hso::constant_function(grid, 1.0),
                               hso::DyadicSystem::Standard, t, max_level);
  Output out;
  out.tool = "maximal";
  out.config = {{"t", num(t)},         {"levels", num(levels)},
                {"cells", num(cells)}, {"ntheta", num(ntheta)},
                {"max_level", num(max_level)}};
  out.columns = {"annulus", "min_ratio", "max_ratio"};
  // Per annulus: window of M_t 1 / (1-|z|^2)^{-2(t-1)}.
  for (int k = 0; k < levels; ++k) {
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < grid->n_r(); ++i) {
      double r = grid->r_nodes[static_cast<std::size_t>(i)];
      double u = 1.0 - r;
      if (!(u > std::exp2(-k - 1) && u <= std::exp2(-k))) continue;
      double envelope = std::pow(1.0 - r * r, -2.0 * (t - 1.0));
      for (int j = 0; j < grid->n_theta; ++j) {
        double ratio = m1.at(i, j) / envelope;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    if (hi > 0.0) out.rows.push_back({num(k), num(lo), num(hi)});
  }
  double q = 1.0 / (2.0 * t - 2.0);
  out.summary["weak_opnorm_linf"] = num(hso::weak_norm(m1, q));
  out.summary["truncation_level"] = num(max_level);
  deliver(out, common.output, common.format);
  return 0;
}

int run_bergman(double t, int nr, int ntheta, double rmax, const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  auto grid = hso::make_polar_grid(nr, ntheta, rmax, hso::RadialLayout::GaussLegendre);
  if (common.dry_run) return 0;

  auto one = hso::constant_function(grid, 1.0);
  auto k1 = hso::apply_bergman(t, one);
  auto kp = hso::apply_bergman_positive(t, one);
  Output out;
  out.tool = "bergman";
  out.config = {{"t", num(t)}, {"nr", num(nr)}, {"ntheta", num(ntheta)}, {"rmax", num(rmax)}};
  out.columns = {"r", "k1_deviation", "kplus_ratio"};
  double worst_dev = 0.0;
  for (int i = 0; i < grid->n_r(); ++i) {
    double r = grid->r_nodes[static_cast<std::size_t>(i)];
    double dev = 0.0, ratio = 0.0;
    for (int j = 0; j < grid->n_theta; ++j) {
      dev = std::max(dev, std::abs(k1.at(i, j) - 1.0));
      ratio = std::max(ratio, kp.at(i, j) * std::pow(1.0 - r * r, 2.0 * (t - 1.0)));
    }
    if (r <= 0.9) worst_dev = std::max(worst_dev, dev);
    out.rows.push_back({num(r), num(dev), num(ratio)});
  }
  out.summary["max_k1_deviation_below_0.9"] = num(worst_dev);
  if (auto warn = hso::bergman_resolution_warning(t, *grid))
    out.summary["resolution_warning"] = *warn;
  deliver(out, common.output, common.format);
  return 0;
}

int run_dominate(double t, std::uint64_t seed, int count, int levels, int cells,
                 int ntheta, int depth, const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  auto grid = hso::make_dyadic_polar_grid(levels, cells, ntheta);
  if (depth < 0) depth = levels - 1;
  hso::ensure_box_resolution(*grid, hso::DyadicSystem::Standard, depth, 1);
  if (common.dry_run) return 0;

  std::vector<hso::GridFunction> fs;
  fs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    fs.push_back(hso::sample_function(
        grid, hso::random_test_function(seed + static_cast<std::uint64_t>(i))));
  auto results = hso::sparse_domination_check_batch(t, fs, depth);

  Output out;
  out.tool = "dominate";
  out.config = {{"t", num(t)},         {"seed", std::to_string(seed)},
                {"count", num(count)}, {"levels", num(levels)},
                {"cells", num(cells)}, {"ntheta", num(ntheta)},
                {"depth", num(depth)}};
  out.columns = {"index", "sup_ratio"};
  double overall = 0.0;
  for (int i = 0; i < count; ++i) {
    out.rows.push_back({num(i), num(results[static_cast<std::size_t>(i)].sup_ratio)});
    overall = std::max(overall, results[static_cast<std::size_t>(i)].sup_ratio);
  }
  out.summary["max_sup_ratio"] = num(overall);
  deliver(out, common.output, common.format);
  return 0;
}

int run_weights(double t, const std::string& weight_spec, int kmax,
                const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  hso::RadialWeight w = parse_weight(weight_spec);
  if (common.dry_run) return 0;

  auto weak = hso::endpoint_weak_condition(w, t, kmax);
  auto strong = hso::endpoint_strong_condition(w, t, kmax);
  double l = 1.0 / (3.0 - 2.0 * t);
  std::vector<double> schedule;
  for (int k = 1; k <= 20; ++k) schedule.push_back(std::exp2(-k));
  double bb = hso::bekolle_bonami(w, l, schedule);

  Output out;
  out.tool = "weights";
  out.config = {{"t", num(t)}, {"weight", weight_spec}, {"kmax", num(kmax)}};
  out.columns = {"k", "a_k", "partial_sum"};
  for (std::size_t k = 0; k < weak.a.size(); ++k)
    out.rows.push_back(
        {num(static_cast<double>(k)), num(weak.a[k]), num(strong.partial_sums[k])});
  out.summary["weak_verdict"] = verdict_name(weak.verdict);
  out.summary["weak_sup"] = num(weak.sup);
  out.summary["strong_verdict"] = verdict_name(strong.verdict);
  out.summary["bekolle_bonami"] = num(bb);
  out.summary["bekolle_bonami_l"] = num(l);
  deliver(out, common.output, common.format);
  return 0;
}

int run_blowup(int m, double t, const CommonOpts& common) {
  if (!(t > 1.0)) throw std::invalid_argument("blowup: t must be > 1");
  if (common.dry_run) return 0;
  auto fam = hso::family_counterexample(m);
  auto rep = hso::blowup_report(fam, t);
  Output out;
  out.tool = "blowup";
  out.config = {{"m", num(m)}, {"t", num(t)}};
  out.columns = {"value_on_partition", "paper_lower_bound", "mass_linf_to_l1"};
  out.rows.push_back({num(rep.value_on_partition), num(rep.paper_lower_bound),
                      num(rep.mass_linf_to_l1)});
  out.summary["degree"] = num(hso::degree(fam));
  out.summary["eta"] = num(fam.eta);
  deliver(out, common.output, common.format);
  return 0;
}

int run_decompose(double t, double alpha, std::uint64_t seed, bool use_seed,
                  int levels, int cells, int ntheta, int max_level,
                  const CommonOpts& common) {
  hso::ensure_admissible_disc_t(t);
  if (!(alpha > 0.0)) throw std::invalid_argument("decompose: alpha must be > 0");
  auto grid = hso::make_dyadic_polar_grid(levels, cells, ntheta);
  if (max_level < 0) max_level = levels - 1;
  hso::ensure_box_resolution(*grid, hso::DyadicSystem::Standard, max_level, 1);
  if (common.dry_run) return 0;

  hso::GridFunction f =
      use_seed ? hso::sample_function(grid, hso::random_test_function(seed))
               : hso::constant_function(grid, 1.0);
  auto boxes = hso::level_set_decomposition(f, hso::DyadicSystem::Standard, t,
                                            alpha, max_level);
  Output out;
  out.tool = "decompose";
  out.config = {{"t", num(t)},           {"alpha", num(alpha)},
                {"levels", num(levels)}, {"cells", num(cells)},
                {"ntheta", num(ntheta)}, {"max_level", num(max_level)},
                {"fn", use_seed ? "seeded:" + std::to_string(seed) : "constant"}};
  out.columns = {"level", "index", "area"};
  for (const auto& box : boxes)
    out.rows.push_back({num(box.arc.level), std::to_string(box.arc.index), num(box.area)});
  out.summary["box_count"] = num(static_cast<double>(boxes.size()));
  deliver(out, common.output, common.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypersingular operator laboratory"};
  app.set_version_flag("--version", std::string("hso ") + hso::kVersion);
  app.require_subcommand(1);

  // Expand --config FILE into --key=value arguments right after the
  // subcommand name, so explicit flags given later take precedence.
  std::vector<std::string> args;
  try {
    std::vector<std::string> raw(argv + 1, argv + argc);
    std::vector<std::string> config_args;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == "--config" && i + 1 < raw.size()) {
        auto extra = load_config_args(raw[i + 1]);
        config_args.insert(config_args.end(), extra.begin(), extra.end());
        ++i;
      } else if (raw[i].rfind("--config=", 0) == 0) {
        auto extra = load_config_args(raw[i].substr(9));
        config_args.insert(config_args.end(), extra.begin(), extra.end());
      } else {
        args.push_back(raw[i]);
      }
    }
    if (!config_args.empty()) {
      if (args.empty())
        throw std::runtime_error("--config requires a subcommand");
      args.insert(args.begin() + 1, config_args.begin(), config_args.end());
    }
  } catch (const std::exception& e) {
    std::cerr << "hso: " << e.what() << "\n";
    return 2;
  }

  CommonOpts common[9];
  struct {
    double t = 1.25;
    std::string kind = "singular";
    int resolution = 101;
    int n = 2;
    double eta = 0.5;
    double K = 1.0;
  } region;
  auto* cmd_region = app.add_subcommand("region", "classify the (1/p,1/q) square");
  cmd_region->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_region->add_option("--t", region.t, "hypersingular index");
  cmd_region->add_option("--kind", region.kind)->check(CLI::IsMember({"maximal", "singular"}));
  cmd_region->add_option("--resolution", region.resolution)->check(CLI::Range(2, 4096));
  cmd_region->add_option("--n", region.n)->check(CLI::Range(1, 16));
  cmd_region->add_option("--eta", region.eta);
  cmd_region->add_option("--K", region.K);
  add_common(cmd_region, common[0]);

  struct {
    std::string family = "carleson";
    double t = 1.25;
    int jmin = 2, jmax = 12;
  } layers;
  auto* cmd_layers = app.add_subcommand("layer-norms", "exact per-layer corner norms");
  cmd_layers->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_layers->add_option("--family", layers.family);
  cmd_layers->add_option("--t", layers.t);
  cmd_layers->add_option("--jmin", layers.jmin);
  cmd_layers->add_option("--jmax", layers.jmax)->check(CLI::Range(2, 24));
  add_common(cmd_layers, common[1]);

  struct {
    double t = 1.25;
    int jmax = 12;
    double beta1 = 0.0, M1 = 1.0, beta2 = 0.0, M2 = 1.0;
  } bourgain;
  auto* cmd_bourgain = app.add_subcommand("bourgain", "interpolate layer rates to the endpoint");
  cmd_bourgain->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_bourgain->add_option("--t", bourgain.t);
  cmd_bourgain->add_option("--jmax", bourgain.jmax)->check(CLI::Range(4, 24));
  auto* b1 = cmd_bourgain->add_option("--beta1", bourgain.beta1);
  cmd_bourgain->add_option("--M1", bourgain.M1);
  auto* b2 = cmd_bourgain->add_option("--beta2", bourgain.beta2);
  cmd_bourgain->add_option("--M2", bourgain.M2);
  add_common(cmd_bourgain, common[2]);

  struct {
    double t = 1.25;
    int levels = 8, cells = 8, ntheta = 256, max_level = -1;
  } maximal;
  auto* cmd_maximal = app.add_subcommand("maximal", "M_t 1 comparability profile");
  cmd_maximal->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_maximal->add_option("--t", maximal.t);
  cmd_maximal->add_option("--levels", maximal.levels)->check(CLI::Range(2, 16));
  cmd_maximal->add_option("--cells", maximal.cells)->check(CLI::Range(1, 64));
  cmd_maximal->add_option("--ntheta", maximal.ntheta)->check(CLI::Range(2, 1 << 15));
  cmd_maximal->add_option("--max-level", maximal.max_level);
  add_common(cmd_maximal, common[3]);

  struct {
    double t = 1.25;
    int nr = 64, ntheta = 128;
    double rmax = 0.9999;
  } bergman;
  auto* cmd_bergman = app.add_subcommand("bergman", "kernel quadrature diagnostics");
  cmd_bergman->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_bergman->add_option("--t", bergman.t);
  cmd_bergman->add_option("--nr", bergman.nr)->check(CLI::Range(4, 4096));
  cmd_bergman->add_option("--ntheta", bergman.ntheta)->check(CLI::Range(4, 8192));
  cmd_bergman->add_option("--rmax", bergman.rmax);
  add_common(cmd_bergman, common[4]);

  struct {
    double t = 1.25;
    std::uint64_t seed = 0;
    int count = 20, levels = 6, cells = 8, ntheta = 64, depth = -1;
  } dominate;
  auto* cmd_dominate = app.add_subcommand("dominate", "sparse domination sup ratios");
  cmd_dominate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_dominate->add_option("--t", dominate.t);
  cmd_dominate->add_option("--seed", dominate.seed)->required();
  cmd_dominate->add_option("--count", dominate.count)->check(CLI::Range(1, 1000));
  cmd_dominate->add_option("--levels", dominate.levels)->check(CLI::Range(2, 12));
  cmd_dominate->add_option("--cells", dominate.cells)->check(CLI::Range(1, 64));
  cmd_dominate->add_option("--ntheta", dominate.ntheta)->check(CLI::Range(2, 4096));
  cmd_dominate->add_option("--depth", dominate.depth);
  add_common(cmd_dominate, common[5]);

  struct {
    double t = 1.25;
    std::string weight = "power:0";
    int kmax = 40;
  } weights;
  auto* cmd_weights = app.add_subcommand("weights", "weighted endpoint criteria");
  cmd_weights->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_weights->add_option("--t", weights.t);
  cmd_weights->add_option("--weight", weights.weight, "power:<gamma> or table:<path>");
  cmd_weights->add_option("--kmax", weights.kmax)->check(CLI::Range(4, 60));
  add_common(cmd_weights, common[6]);

  struct {
    int m = 12;
    double t = 1.25;
  } blowup;
  auto* cmd_blowup = app.add_subcommand("blowup", "two-layer counterexample figures");
  cmd_blowup->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_blowup->add_option("--m", blowup.m)->check(CLI::Range(1, 24));
  cmd_blowup->add_option("--t", blowup.t);
  add_common(cmd_blowup, common[7]);

  struct {
    double t = 1.25;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    int levels = 6, cells = 8, ntheta = 64, max_level = -1;
  } decompose;
  auto* cmd_decompose = app.add_subcommand("decompose", "maximal level-set boxes");
  cmd_decompose->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_decompose->add_option("--t", decompose.t);
  cmd_decompose->add_option("--alpha", decompose.alpha);
  auto* seed_opt = cmd_decompose->add_option("--seed", decompose.seed);
  cmd_decompose->add_option("--levels", decompose.levels)->check(CLI::Range(2, 14));
  cmd_decompose->add_option("--cells", decompose.cells)->check(CLI::Range(1, 64));
  cmd_decompose->add_option("--ntheta", decompose.ntheta)->check(CLI::Range(2, 1 << 15));
  cmd_decompose->add_option("--max-level", decompose.max_level);
  add_common(cmd_decompose, common[8]);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 vector parse order
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (cmd_region->parsed())
      return run_region(region.t, region.kind, region.resolution, region.n,
                        region.eta, region.K, common[0]);
    if (cmd_layers->parsed())
      return run_layer_norms(layers.family, layers.t, layers.jmin, layers.jmax,
                             common[1]);
    if (cmd_bourgain->parsed()) {
      bool explicit_rates = b1->count() > 0 || b2->count() > 0;
      return run_bourgain(bourgain.t, bourgain.jmax, explicit_rates,
                          bourgain.beta1, bourgain.M1, bourgain.beta2,
                          bourgain.M2, common[2]);
    }
    if (cmd_maximal->parsed())
      return run_maximal(maximal.t, maximal.levels, maximal.cells,
                         maximal.ntheta, maximal.max_level, common[3]);
    if (cmd_bergman->parsed())
      return run_bergman(bergman.t, bergman.nr, bergman.ntheta, bergman.rmax,
                         common[4]);
    if (cmd_dominate->parsed())
      return run_dominate(dominate.t, dominate.seed, dominate.count,
                          dominate.levels, dominate.cells, dominate.ntheta,
                          dominate.depth, common[5]);
    if (cmd_weights->parsed())
      return run_weights(weights.t, weights.weight, weights.kmax, common[6]);
    if (cmd_blowup->parsed()) return run_blowup(blowup.m, blowup.t, common[7]);
    if (cmd_decompose->parsed())
      return run_decompose(decompose.t, decompose.alpha, decompose.seed,
                           seed_opt->count() > 0, decompose.levels,
                           decompose.cells, decompose.ntheta,
                           decompose.max_level, common[8]);
  } catch (const std::exception& e) {
    std::cerr << "hso: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
