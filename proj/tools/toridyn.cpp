#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "toridyn/jobs.hpp"

namespace {

struct Cli {
  std::string job_file;
  std::string out_file;
  std::string strategy;
  std::string format = "json";
  long branch_cap = -1;
};

void add_common(CLI::App* sub, Cli& cli) {
  sub->add_option("--job", cli.job_file, "job file (JSON)")->required();
  sub->add_option("--out", cli.out_file, "write the report here instead of stdout");
  sub->add_option("--strategy", cli.strategy, "override the job's search strategy")
      ->check(CLI::IsMember({"exhaustive", "first_ray"}));
  sub->add_option("--branch-cap", cli.branch_cap, "override the job's trace cap")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", cli.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact algebraic dynamics on toric varieties"};
  app.require_subcommand(1);
  Cli cli;
  for (const char* name : {"analyze", "mmp", "preper", "difficulty", "entropy"})
    add_common(app.add_subcommand(name), cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ifstream in(cli.job_file);
    if (!in) throw toridyn::input_error("cannot read job file: " + cli.job_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    toridyn::Job job = toridyn::parse_job(text);
    if (!cli.strategy.empty()) job.strategy = cli.strategy;
    if (cli.branch_cap > 0) job.branch_cap = static_cast<size_t>(cli.branch_cap);

    const std::string command = app.get_subcommands().at(0)->get_name();
    toridyn::RunResult result = toridyn::run_command(command, job, cli.format);

    if (cli.out_file.empty()) {
      std::cout << result.text;
    } else {
      std::ofstream out(cli.out_file);
      if (!out) throw toridyn::input_error("cannot write report file: " + cli.out_file);
      out << result.text;
    }
    return result.exit_code;
  } catch (const toridyn::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const toridyn::unsupported_geometry& e) {
    std::cerr << "unsupported geometry: " << e.what() << "\n";
    return 3;
  } catch (const toridyn::resource_cap& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
