#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <iostream>

#include "commands.hpp"
#include "khess/errors.hpp"

namespace {

using khess::cli::Options;

int fail(const char* category, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"category", category}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

int exit_code_for(const khess::Error& e) {
  const std::string cat = e.category();
  if (cat == "parameter_domain") return 3;
  if (cat == "regime") return 4;
  if (cat == "numerical") return 5;
  if (cat == "divergence") return 6;
  if (cat == "domain") return 8;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar profiles of the k-Hessian evolution equation with a power source",
               "khess"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KHESS_VERSION);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  Options o;
  for (int i = 1; i < argc; ++i) o.argv.emplace_back(argv[i]);
  app.add_option("--n", o.n, "Spatial dimension");
  app.add_option("--k", o.k, "Hessian order (odd)");
  app.add_option("--q", o.q, "Source exponent");
  app.add_option("--kappa", o.kappa, "Linear coefficient (default kappa0 = 2k/(q-k))");
  app.add_option("--gamma", o.gamma, "Shooting height v(0)");
  app.add_option("--smax", o.smax, "Truncation point in s");
  app.add_option("--rtol", o.rtol, "Relative tolerance");
  app.add_option("--atol", o.atol, "Absolute tolerance");
  app.add_option("--out", o.out, "Output file (stdout when omitted)");
  app.add_option("--jobs", o.jobs, "Worker threads for sweeps (0 = all cores)");

  std::map<std::string, std::function<int(const Options&)>> handlers;
  auto add = [&](const char* name, const char* help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    handlers[name] = fn;
    return sub;
  };
  add("exponents", "Critical exponents, regime and type-I exponents", khess::cli::cmd_exponents);
  add("profile", "Integrate one profile and write it as CSV", khess::cli::cmd_profile);
  add("classify", "Classify one profile (JSON report)", khess::cli::cmd_classify);
  add("shoot", "Find a fast-decay shooting height by bisection", khess::cli::cmd_shoot);
  CLI::App* sweep = add("sweep", "Classify a grid of shooting heights (CSV)", khess::cli::cmd_sweep);
  sweep->add_option("--gammas", o.gammas, "Comma separated heights")->delimiter(',');
  sweep->add_option("--range", o.range, "LO,HI,N evenly spaced heights")->delimiter(',');
  sweep->add_flag("--geometric", o.geometric, "Space --range geometrically");
  CLI::App* oracle = add("oracle", "Compare a closed-form family with the integrator",
                         khess::cli::cmd_oracle);
  oracle->add_option("--family", o.family, "exact-k1, barenblatt or tso");
  oracle->add_option("--C", o.C, "Barenblatt constant");
  oracle->add_option("--mu", o.mu, "Tso scale parameter");
  oracle->add_option("--points", o.points, "Number of log-spaced radii");
  CLI::App* selfsim = add("selfsim", "Self-similar solution norms and limits",
                          khess::cli::cmd_selfsim);
  selfsim->add_option("--p", o.ps, "Comma separated Lebesgue exponents")->delimiter(',');
  selfsim->add_option("--times", o.times, "Comma separated times")->delimiter(',');
  selfsim->add_option("--epsilon", o.epsilon, "Radius for the small-time checks");
  CLI::App* table1 = add("table1", "Classification table over q at kappa = kappa0",
                         khess::cli::cmd_table1);
  table1->add_option("--qs", o.qs, "Comma separated source exponents")->delimiter(',');
  table1->add_option("--gammas", o.gammas, "Comma separated heights")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help();
    return fail("usage", e.what(), 2);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  o.command = chosen->get_name();
  try {
    return handlers.at(o.command)(o);
  } catch (const khess::cli::UsageError& e) {
    std::cerr << chosen->help();
    return fail("usage", e.what(), 2);
  } catch (const khess::Error& e) {
    return fail(e.category(), e.what(), exit_code_for(e));
  } catch (const khess::cli::IoError& e) {
    return fail("io", e.what(), 7);
  } catch (const std::ios_base::failure& e) {
    return fail("io", e.what(), 7);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
