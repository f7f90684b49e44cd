// Command-line front end for the extrafunction calculus library.
//
// extrafun eval EXPR [--x X] [--n N]
// extrafun equiv [--config FILE | --f SRC --g SRC] [--window S:E:EPS] [--format text|csv]
// extrafun diff  --config FILE [--window S:E:EPS] [--format text|csv]
// extrafun demo  NAME
// extrafun check SUITE
//
// Exit codes: 0 success/Holds, 1 Fails, 2 syntax error, 3 domain error,
// 4 Inconclusive, 5 configuration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <extrafun/cli.hpp>
#include <extrafun/extrafun.hpp>

namespace {

using extrafun::cli::json;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw extrafun::config_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw extrafun::config_error("config parse failure: " + std::string(e.what()));
  }
  return j;
}

struct equiv_args {
  std::string config_path;
  std::string f_src, g_src;
  std::string window_flag;
  std::string format = "text";
};

int do_equiv(const equiv_args& a) {
  using namespace extrafun;
  std::optional<fun_seq> f, g;
  std::optional<seminorm_family> family;
  std::optional<window> w;

  if (!a.config_path.empty()) {
    json j = load_config(a.config_path);
    cli::check_keys(j, {"family", "f", "g", "window"}, "config");
    if (j.contains("family")) family = cli::parse_family(j["family"]);
    if (j.contains("f")) f = cli::parse_seq(j["f"], "f");
    if (j.contains("g")) g = cli::parse_seq(j["g"], "g");
    if (j.contains("window")) w = cli::parse_window(j["window"]);
  }
  // flags win over config
  if (!a.f_src.empty()) f = fun_seq::from_expr(parse(a.f_src));
  if (!a.g_src.empty()) g = fun_seq::from_expr(parse(a.g_src));
  if (!a.window_flag.empty()) w = cli::parse_window_flag(a.window_flag);

  if (!f || !g) throw config_error("equiv needs both sequences (--f/--g or config f/g)");
  if (!family) family = compact_sup_family({{0.0, 1.0}});
  if (!w) w = default_window_for(*family);
  return cli::run_equiv(*f, *g, *family, *w, a.format, std::cout);
}

struct diff_args {
  std::string config_path;
  std::string window_flag;
  std::string format = "text";
};

int do_diff(const diff_args& a) {
  using namespace extrafun;
  if (a.config_path.empty()) throw config_error("diff needs --config");
  json j = load_config(a.config_path);
  cli::check_keys(j, {"family", "f", "section", "window", "indices", "max_scan", "compare"},
                  "config");
  if (!j.contains("family")) throw config_error("diff config needs a 'family'");
  seminorm_family family = cli::parse_family(j["family"]);
  window w = j.contains("window") ? cli::parse_window(j["window"]) : default_window_for(family);
  if (!a.window_flag.empty()) w = cli::parse_window_flag(a.window_flag);

  cli::section_config sec = j.contains("section")
                                ? cli::parse_section(j["section"], family, w)
                                : cli::section_config{section(rep_section{}), {}, {}};

  std::optional<hyper_element> F;
  if (sec.coeffs && sec.basis) {
    F = span_element(*sec.basis, *sec.coeffs);
  } else if (j.contains("f")) {
    F = project(cli::parse_seq(j["f"], "f"), family);
  }
  if (!F)
    throw config_error("diff config needs 'f' (or a basis-linear section with 'coeffs')");

  std::vector<long long> indices{1, 2, 3, 4};
  if (j.contains("indices")) {
    if (!j["indices"].is_array()) throw config_error("'indices' must be an array");
    indices.clear();
    for (const auto& i : j["indices"]) {
      if (!i.is_number_integer() || i.get<long long>() < 1)
        throw config_error("'indices' must be integers >= 1");
      indices.push_back(i.get<long long>());
    }
  }
  const long long max_scan = j.value("max_scan", 64);
  std::optional<fun_seq> compare;
  if (j.contains("compare")) compare = cli::parse_seq(j["compare"], "compare");

  return cli::run_diff(*F, sec.sec, w, indices, max_scan, compare, a.format, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calculus of norm-based extrafunctions: windowed equivalence, sections, "
               "and sectional derivatives"};
  app.require_subcommand(1);

  // eval
  std::string eval_expr;
  double eval_x = 0.0;
  long long eval_n = 1;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate an expression at (x, n)");
  eval_cmd->add_option("expr", eval_expr, "expression source")->required();
  eval_cmd->add_option("--x", eval_x, "value of x (default 0)");
  eval_cmd->add_option("--n", eval_n, "sequence index n >= 1 (default 1)");

  // equiv
  equiv_args eq;
  CLI::App* equiv_cmd = app.add_subcommand("equiv", "decide equivalence of two sequences");
  equiv_cmd->add_option("--config", eq.config_path, "JSON config file");
  equiv_cmd->add_option("--f", eq.f_src, "first sequence as an expression in (x, n)");
  equiv_cmd->add_option("--g", eq.g_src, "second sequence as an expression in (x, n)");
  equiv_cmd->add_option("--window", eq.window_flag, "START:END:EPS");
  equiv_cmd->add_option("--format", eq.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  // diff
  diff_args df;
  CLI::App* diff_cmd = app.add_subcommand("diff", "sectional derivative of a class");
  diff_cmd->add_option("--config", df.config_path, "JSON config file")->required();
  diff_cmd->add_option("--window", df.window_flag, "START:END:EPS");
  diff_cmd->add_option("--format", df.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));

  // demo
  std::string demo_name;
  CLI::App* demo_cmd = app.add_subcommand("demo", "run a named end-to-end scenario");
  demo_cmd->add_option("name", demo_name,
                       "irregularity-compact | irregularity-pointwise | nonadditive-section | "
                       "hausdorff-witness | smoothing")
      ->required();

  // check
  std::string suite_name;
  CLI::App* check_cmd = app.add_subcommand("check", "run a property suite");
  check_cmd->add_option("suite", suite_name,
                        "seminorm-axioms | vector-laws | topology-strength | section-laws | all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : extrafun::cli::exit_config;
  }

  try {
    if (*eval_cmd) return extrafun::cli::run_eval(eval_expr, eval_x, eval_n, std::cout);
    if (*equiv_cmd) return do_equiv(eq);
    if (*diff_cmd) return do_diff(df);
    if (*demo_cmd) return extrafun::cli::run_demo(demo_name, std::cout);
    if (*check_cmd) return extrafun::cli::run_check(suite_name, std::cout);
  } catch (const extrafun::syntax_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return extrafun::cli::exit_syntax;
  } catch (const extrafun::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return extrafun::cli::exit_domain;
  } catch (const extrafun::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return extrafun::cli::exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return extrafun::cli::exit_config;
  }
  return extrafun::cli::exit_config;
}
