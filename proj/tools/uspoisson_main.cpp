#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "usp/cli.hpp"
#include "usp/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "uspoisson: spectral Poisson-type solver on [-1,1]^2.\n"
      "Expressions use +, -, *, / and right-associative ^ (unary minus binds\n"
      "looser than ^, so -x^2 = -(x^2)), functions sin/cos/exp/log/sqrt/abs,\n"
      "constants pi and e, variables x and y."};
  std::string config_path;
  usp::CliOptions opts;
  app.add_option("--config", config_path, "problem file")->required();
  app.add_flag("--oracle", opts.oracle, "force the dense Kronecker solver (n <= 64)");
  app.add_flag("--benchmark", opts.benchmark, "run fixed-size timing benchmarks");
  app.add_flag("--check", opts.check, "print residual and boundary-condition norms");
  app.add_flag("--quiet", opts.quiet, "suppress progress output");
  CLI11_PARSE(app, argc, argv);

  std::string text;
  {
    std::ifstream is(config_path, std::ios::binary);
    if (!is) {
      std::cerr << "error: cannot read config file: " << config_path << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }

  try {
    usp::RunConfig cfg = usp::parse_config(text);
    try {
      return usp::run(cfg, opts);
    } catch (const usp::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const usp::InvalidArgumentError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "solver error: " << e.what() << "\n";
      return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
