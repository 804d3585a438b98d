#include "barter/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "barter/plot.hpp"
#include "barter/report.hpp"

namespace barter {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  bool json = false;
  bool decimal = false;
  bool force = false;
  std::size_t limit = kDefaultEnumerationLimit;
  unsigned workers = 1;
  std::uint64_t seed = 0;
};

EnumerationOptions enumeration_options(const GlobalFlags& g) { return {g.limit, g.force, g.workers}; }

std::size_t env_limit() {
  const char* raw = std::getenv("BARTER_LIMIT");
  if (!raw || !*raw) return kDefaultEnumerationLimit;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("BARTER_LIMIT must be a non-negative integer, got '") + raw + "'");
  }
}

std::pair<PlayerId, Rational> parse_player_value(const std::string& spec, const char* flag) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(flag) + " expects PLAYER:VALUE, got '" + spec + "'");
  try {
    return {parse_player(spec.substr(0, colon)), Rational::parse(spec.substr(colon + 1))};
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << content;
  if (!file.flush()) throw UsageError("cannot write '" + path + "'");
}

std::string point_text(const OutcomePoint& pt, bool decimal) {
  return "(" + render(pt.u_x, decimal) + ", " + render(pt.u_y, decimal) + ")";
}

std::string chosen_text(const ChosenPoint& c, bool decimal) {
  if (c.exact) return point_text(*c.exact, decimal);
  std::ostringstream s;
  s.precision(decimal ? 6 : 12);
  if (decimal) s << std::fixed;
  s << "(" << c.u_x << ", " << c.u_y << ")";
  return s.str();
}

std::string objective_text(const Objective& o, bool decimal) {
  if (const auto* r = std::get_if<Rational>(&o)) return render(*r, decimal);
  std::ostringstream s;
  s.precision(decimal ? 6 : 12);
  if (decimal) s << std::fixed;
  s << std::get<double>(o);
  return s.str();
}

void print_report(std::ostream& out, const Instance& inst, const SolutionReport& r, bool decimal) {
  out << to_string(r.algorithm) << ": ";
  if (r.no_trade) {
    out << "no trade\n";
    return;
  }
  out << "headline " << chosen_text(r.headline(), decimal);
  if (r.objective) out << ", objective " << objective_text(*r.objective, decimal);
  out << ", ties " << r.tie_count() << (r.is_lottery ? ", lottery" : "") << "\n";
  for (const auto& c : r.chosen) {
    out << "  point " << chosen_text(c, decimal) << "\n";
    for (const auto& ex : c.exchanges) out << "    " << describe(inst, ex) << "\n";
    if (c.lottery) {
      out << "    lottery between " << point_text(c.lottery->first.point, decimal) << " and "
          << point_text(c.lottery->second.point, decimal) << ", probability of the second "
          << objective_text(c.lottery->weight, decimal) << "\n";
      for (const auto* side : {&c.lottery->first, &c.lottery->second}) {
        for (const auto& ex : side->exchanges) {
          out << "      " << point_text(side->point, decimal) << ": " << describe(inst, ex) << "\n";
        }
      }
    }
  }
}

void print_certificate(std::ostream& out, const NoTradeCertificate& cert) {
  out << "no-trade certificate: " << to_string(cert.kind);
  if (cert.firing.size() > 1) {
    out << " (also";
    for (std::size_t i = 1; i < cert.firing.size(); ++i) out << " " << to_string(cert.firing[i]);
    out << ")";
  }
  out << "\n";
  if (cert.compensation_x.applicable) {
    out << "  X: value of Y's items " << cert.compensation_x.other_sum << " vs cheapest own item "
        << cert.compensation_x.own_min << " (" << cert.compensation_x.cheapest_item << ")\n";
  }
  if (cert.compensation_y.applicable) {
    out << "  Y: value of X's items " << cert.compensation_y.other_sum << " vs cheapest own item "
        << cert.compensation_y.own_min << " (" << cert.compensation_y.cheapest_item << ")\n";
  }
  if (cert.brute_force_verified) {
    out << "  brute force: " << cert.acceptable_exchanges << " acceptable of " << cert.exchanges_checked
        << " exchanges\n";
  } else {
    out << "  brute force: skipped (above enumeration limit)\n";
  }
}

GeneratorConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  GeneratorConfig cfg;
  try {
    const auto doc = nlohmann::json::parse(in);
    auto rational = [](const nlohmann::json& v) {
      return v.is_string() ? Rational::parse(v.get<std::string>()) : Rational::parse(v.dump());
    };
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("p")) cfg.p = doc["p"].get<std::size_t>();
    if (doc.contains("q")) cfg.q = doc["q"].get<std::size_t>();
    if (doc.contains("value_lo")) cfg.value_lo = rational(doc["value_lo"]);
    if (doc.contains("value_hi")) cfg.value_hi = rational(doc["value_hi"]);
    if (doc.contains("value_grid")) cfg.value_grid = doc["value_grid"].get<std::uint64_t>();
    if (doc.contains("condition")) cfg.condition = parse_condition(doc["condition"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  }
  return cfg;
}

struct GeneratorFlags {
  std::string config;
  std::size_t p = 3;
  std::size_t q = 3;
  std::string lo = "0";
  std::string hi = "10";
  std::uint64_t grid = 1;
  std::string condition = "unconstrained";
  CLI::Option* p_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* lo_opt = nullptr;
  CLI::Option* hi_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* condition_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Generator config JSON");
    p_opt = cmd->add_option("--p", p, "Items owned by X");
    q_opt = cmd->add_option("--q", q, "Items owned by Y");
    lo_opt = cmd->add_option("--lo", lo, "Lowest utility value");
    hi_opt = cmd->add_option("--hi", hi, "Highest utility value");
    grid_opt = cmd->add_option("--grid", grid, "Denominator of the value grid");
    condition_opt = cmd->add_option("--condition", condition,
                                    "unconstrained|identical-valuation|mutual-dominance|insufficient-compensation");
  }

  GeneratorConfig resolve(const GlobalFlags& g, const CLI::App& root) const {
    GeneratorConfig cfg = config.empty() ? GeneratorConfig{} : load_config(config);
    if (config.empty() || root.get_option("--seed")->count()) cfg.seed = g.seed;
    try {
      if (config.empty() || p_opt->count()) cfg.p = p;
      if (config.empty() || q_opt->count()) cfg.q = q;
      if (config.empty() || lo_opt->count()) cfg.value_lo = Rational::parse(lo);
      if (config.empty() || hi_opt->count()) cfg.value_hi = Rational::parse(hi);
      if (config.empty() || grid_opt->count()) cfg.value_grid = grid;
      if (config.empty() || condition_opt->count()) cfg.condition = parse_condition(condition);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

int cmd_solve(const GlobalFlags& g, const std::string& file, const std::string& algorithm_name,
              const std::string& path_name, std::ostream& out) {
  const Instance inst = load_instance(file);
  std::vector<Algorithm> algorithms;
  PathVariant path;
  try {
    if (algorithm_name == "all") {
      algorithms.assign(std::begin(kAllAlgorithms), std::end(kAllAlgorithms));
    } else {
      algorithms.push_back(parse_algorithm(algorithm_name));
    }
    path = parse_path_variant(path_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const EnumerationOptions opts = enumeration_options(g);
  const PointCloud cloud = enumerate_cloud(inst, opts);
  const Periphery per = periphery(cloud);
  std::vector<SolutionReport> reports;
  for (Algorithm a : algorithms) reports.push_back(solve(a, per, path));
  std::optional<NoTradeCertificate> cert;
  if (per.empty()) cert = certify_no_trade(inst, opts);

  if (g.json) {
    Json doc;
    doc["p"] = inst.p();
    doc["q"] = inst.q();
    doc["periphery_size"] = per.size();
    doc["no_trade"] = per.empty();
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(inst, r));
    doc["reports"] = std::move(arr);
    if (cert) doc["certificate"] = to_json(*cert);
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  out << "instance: p=" << inst.p() << " q=" << inst.q() << ", periphery " << per.size() << " points\n";
  if (per.empty()) {
    out << "NoTrade: no exchange benefits both players\n";
    print_certificate(out, *cert);
    return kExitOk;
  }
  for (const auto& r : reports) print_report(out, inst, r, g.decimal);
  return kExitOk;
}

int cmd_enumerate(const GlobalFlags& g, const std::string& file, bool points_only, const std::string& csv_path,
                  std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(file);
  const PointCloud cloud = enumerate_cloud(inst, enumeration_options(g));
  const Periphery per = periphery(cloud);
  const std::string csv = cloud_csv(cloud, per, points_only);
  if (!csv_path.empty()) write_file(csv_path, csv);

  std::uint64_t acceptable_count = 0;
  for (const auto& cp : cloud.points) {
    if (acceptable(cp.point)) acceptable_count += cp.exchanges.size();
  }
  const Rational ratio = collapse_ratio(cloud);
  if (g.json) {
    Json doc;
    doc["exchanges"] = cloud.total_exchanges;
    doc["distinct_points"] = cloud.points.size();
    doc["collapse_ratio"] = to_json(ratio);
    doc["acceptable_exchanges"] = acceptable_count;
    doc["periphery_size"] = per.size();
    doc["csv"] = csv_path.empty() ? Json(nullptr) : Json(csv_path);
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::ostream& summary = csv_path.empty() ? err : out;
  if (csv_path.empty()) out << csv;
  summary << "exchanges " << cloud.total_exchanges << ", distinct points " << cloud.points.size()
          << ", collapse ratio " << render(ratio, g.decimal) << ", acceptable exchanges " << acceptable_count
          << ", periphery " << per.size() << "\n";
  return kExitOk;
}

int cmd_transform(const GlobalFlags& g, const std::string& file, const std::vector<std::string>& scales,
                  const std::vector<std::string>& translations, const std::string& output, bool check,
                  bool find_flip, bool strict, std::ostream& out) {
  const Instance inst = load_instance(file);
  std::vector<ScaleTransform> scale_ts;
  for (const auto& s : scales) {
    auto [player, factor] = parse_player_value(s, "--scale");
    try {
      scale_ts.emplace_back(player, factor);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::vector<TranslationTransform> translation_ts;
  for (const auto& s : translations) {
    auto [player, offset] = parse_player_value(s, "--translate");
    translation_ts.push_back({player, offset});
  }
  if (check && scale_ts.empty()) throw UsageError("--check needs at least one --scale");

  Instance result = inst;
  for (const auto& t : scale_ts) result = apply_scale(result, t);
  for (const auto& t : translation_ts) {
    try {
      result = apply_translation(result, t, strict);
    } catch (const InstanceError& e) {
      throw DomainFailure(e.what());
    }
  }
  const std::string serialized = serialize_instance(result);
  if (!output.empty()) write_file(output, serialized);

  const EnumerationOptions opts = enumeration_options(g);
  bool failed = false;
  Json checks = Json::array();
  std::ostringstream text;
  for (const auto& t : scale_ts) {
    if (!check) break;
    const ScaleCheckReport report = check_scale_invariance(inst, t, opts);
    failed = failed || !report.passed;
    Json j = to_json(inst, report);
    j["player"] = std::string(to_string(t.player()));
    j["factor"] = to_json(t.factor());
    checks.push_back(std::move(j));
    text << "scale " << to_string(t.player()) << ":" << t.factor() << " invariance: "
         << (report.passed ? "pass" : "FAIL") << " over " << report.exchanges_checked << " exchanges";
    if (!report.passed) {
      text << " (" << report.failure;
      if (report.counterexample) text << "; " << describe(inst, Exchange::from_moved(inst, *report.counterexample));
      text << ")";
    }
    text << "\n";
  }
  Json flip = nullptr;
  if (find_flip) {
    const auto cx = find_translation_counterexample(inst, opts);
    if (cx) {
      flip = to_json(inst, *cx);
      text << "translation flip: b* = " << render(cx->threshold, g.decimal) << " for " << to_string(cx->player)
           << " on " << describe(inst, cx->exchange) << "\n";
    } else {
      text << "translation flip: none (every acceptable exchange is translation-robust)\n";
    }
  }

  if (g.json) {
    Json doc;
    doc["instance"] = Json::parse(serialized);
    if (check) doc["checks"] = std::move(checks);
    if (find_flip) doc["flip"] = std::move(flip);
    out << doc.dump(2) << "\n";
  } else {
    if (output.empty()) out << serialized;
    out << text.str();
  }
  return failed ? kExitDomainFailure : kExitOk;
}

int cmd_check(const GlobalFlags& g, const std::string& file, std::ostream& out) {
  const Instance inst = load_instance(file);
  NoTradeCertificate cert;
  try {
    cert = certify_no_trade(inst, enumeration_options(g));
  } catch (const CertificateMismatch& e) {
    throw DomainFailure(e.what());
  }
  if (g.json) {
    out << to_json(cert).dump(2) << "\n";
  } else {
    print_certificate(out, cert);
  }
  return kExitOk;
}

int cmd_plot(const GlobalFlags& g, const std::string& file, const std::string& output, bool hull, bool annotate,
             std::ostream& out) {
  const Instance inst = load_instance(file);
  const EnumerationOptions opts = enumeration_options(g);
  const PointCloud cloud = enumerate_cloud(inst, opts);
  const Periphery per = periphery(cloud);
  std::optional<NoTradeKind> kind;
  if (per.empty()) kind = certify_no_trade(inst, opts).kind;
  PlotOptions popts;
  popts.hull = hull;
  popts.annotate = annotate;
  write_file(output, render_svg(cloud, per, popts, kind));
  if (g.json) {
    Json doc;
    doc["svg"] = output;
    doc["points"] = cloud.points.size();
    doc["periphery_size"] = per.size();
    out << doc.dump(2) << "\n";
  } else {
    out << "wrote " << output << " (" << cloud.points.size() << " points, periphery " << per.size() << ")\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-player barter bargaining solver"};
  app.name("barter");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_flag("--json", g.json, "Emit a single JSON document");
  app.add_flag("--decimal", g.decimal, "Render rationals as 6-digit decimals");
  app.add_flag("--force", g.force, "Enumerate above the item limit");
  auto* limit_opt = app.add_option("--limit", g.limit, "Enumeration limit on p + q (default 20, env BARTER_LIMIT)");
  app.add_option("--workers", g.workers, "Enumeration worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Random seed for lab commands");

  std::string file;
  std::string algorithm = "nash";
  std::string path_variant = "adjacent-chain";
  auto* solve = app.add_subcommand("solve", "Pick bargaining solutions");
  solve->add_option("file", file, "Instance JSON")->required();
  solve->add_option("--algorithm", algorithm, "nash|sum|median|eq-sum|eq-diagonal|eq-arc|hull-nash|all");
  solve->add_option("--path-variant", path_variant, "adjacent-chain|hull (eq-arc)");

  bool points_only = false;
  std::string csv_path;
  auto* enumerate = app.add_subcommand("enumerate", "Dump every exchange's outcome point");
  enumerate->add_option("file", file, "Instance JSON")->required();
  enumerate->add_flag("--points-only", points_only, "One row per distinct point");
  enumerate->add_option("--csv", csv_path, "Write the CSV here instead of standard output");

  std::vector<std::string> scales;
  std::vector<std::string> translations;
  std::string output;
  bool check = false;
  bool find_flip = false;
  bool strict = false;
  auto* transform = app.add_subcommand("transform", "Rescale or translate utilities");
  transform->add_option("file", file, "Instance JSON")->required();
  transform->add_option("--scale", scales, "PLAYER:FACTOR, applied first");
  transform->add_option("--translate", translations, "PLAYER:OFFSET, applied after scales");
  transform->add_option("-o,--output", output, "Write the transformed instance here");
  transform->add_flag("--check", check, "Verify scale invariance by enumeration");
  transform->add_flag("--find-flip", find_flip, "Search for a translation-flipped exchange");
  transform->add_flag("--strict", strict, "Reject translations that produce negative utilities");

  auto* check_cmd = app.add_subcommand("check", "Certify that no trade is possible");
  check_cmd->add_option("file", file, "Instance JSON")->required();

  bool hull = false;
  bool annotate = false;
  auto* plot = app.add_subcommand("plot", "Write an SVG scatter of the outcome plane");
  plot->add_option("file", file, "Instance JSON")->required();
  plot->add_option("-o,--output", output, "SVG path")->required();
  plot->add_flag("--hull", hull, "Draw the lottery hull");
  plot->add_flag("--annotate", annotate, "Mark the Nash and median choices");

  auto* lab = app.add_subcommand("lab", "Random instances and experiments");
  lab->require_subcommand(1);
  GeneratorFlags gen_flags;
  GeneratorFlags compare_flags;
  auto* lab_generate = lab->add_subcommand("generate", "Write a seeded random instance");
  gen_flags.attach(lab_generate);
  lab_generate->add_option("-o,--output", output, "Instance path (default: standard output)");
  std::uint64_t runs = 100;
  auto* lab_compare = lab->add_subcommand("compare", "Compare all algorithms over random instances");
  compare_flags.attach(lab_compare);
  lab_compare->add_option("--runs", runs, "Instances to generate");
  lab_compare->add_option("--csv", csv_path, "Write the agreement matrix CSV here");
  auto* lab_greedy = lab->add_subcommand("greedy", "Run the one-for-one greedy baseline");
  lab_greedy->add_option("file", file, "Instance JSON")->required();
  std::string factors_spec = "1/2,1,3,100";
  auto* lab_probe = lab->add_subcommand("probe", "Check that the median/Nash disagreement survives rescaling");
  lab_probe->add_option("file", file, "Instance JSON")->required();
  lab_probe->add_option("--factors", factors_spec, "Comma-separated positive factors");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (!limit_opt->count()) g.limit = env_limit();
    if (solve->parsed()) return cmd_solve(g, file, algorithm, path_variant, out);
    if (enumerate->parsed()) return cmd_enumerate(g, file, points_only, csv_path, out, err);
    if (transform->parsed())
      return cmd_transform(g, file, scales, translations, output, check, find_flip, strict, out);
    if (check_cmd->parsed()) return cmd_check(g, file, out);
    if (plot->parsed()) return cmd_plot(g, file, output, hull, annotate, out);
    if (lab_generate->parsed()) {
      const Instance inst = generate(gen_flags.resolve(g, app));
      const std::string serialized = serialize_instance(inst);
      if (!output.empty()) {
        write_file(output, serialized);
        if (g.json) {
          Json doc;
          doc["instance"] = output;
          out << doc.dump(2) << "\n";
        }
      } else {
        out << serialized;
      }
      return kExitOk;
    }
    if (lab_compare->parsed()) {
      const ComparisonStats stats = compare_algorithms(compare_flags.resolve(g, app), runs, g.workers,
                                                       enumeration_options(g));
      if (!csv_path.empty()) write_file(csv_path, agreement_csv(stats));
      if (g.json) {
        out << to_json(stats).dump(2) << "\n";
      } else {
        out << "instances " << stats.instances_run << ", with trade " << stats.traded_instances()
            << ", median != nash " << stats.median_nash_disagreements << ", mean collapse ratio "
            << stats.mean_collapse_ratio() << ", greedy optimal " << stats.greedy_optimal << ", greedy stuck "
            << stats.greedy_stuck << "\n";
        out << agreement_csv(stats);
      }
      return kExitOk;
    }
    if (lab_greedy->parsed()) {
      const Instance inst = load_instance(file);
      check_enumeration_limit(inst, enumeration_options(g));
      const GreedyResult result = greedy_one_for_one(inst);
      if (g.json) {
        out << to_json(inst, result).dump(2) << "\n";
      } else {
        out << "greedy one-for-one: " << result.trace.size() << " steps, final "
            << point_text(result.final_point, g.decimal) << "\n";
        for (const auto& s : result.trace) {
          out << "  X gives " << inst.items()[s.x_item].name << " for " << inst.items()[s.y_item].name
              << ": gains (" << render(s.gain_x, g.decimal) << ", " << render(s.gain_y, g.decimal) << ")\n";
        }
      }
      return kExitOk;
    }
    if (lab_probe->parsed()) {
      const Instance inst = load_instance(file);
      std::vector<Rational> factors;
      std::stringstream list(factors_spec);
      for (std::string token; std::getline(list, token, ',');) {
        try {
          factors.push_back(Rational::parse(token));
        } catch (const std::invalid_argument& e) {
          throw UsageError(std::string("--factors: ") + e.what());
        }
        if (factors.back().sign() <= 0) throw UsageError("--factors must be positive");
      }
      ProbeReport report;
      try {
        report = median_dislike_scale_probe(inst, factors, enumeration_options(g));
      } catch (const std::invalid_argument& e) {
        throw DomainFailure(e.what());
      }
      if (g.json) {
        out << to_json(inst, report).dump(2) << "\n";
      } else {
        out << "median/Nash disagreement under rescaling: " << (report.passed ? "stable" : "BROKEN") << " over "
            << report.rows.size() << " rescalings\n";
      }
      return report.passed ? kExitOk : kExitDomainFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  } catch (const DomainFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  }
  return kExitUsage;
}

}  // namespace barter
