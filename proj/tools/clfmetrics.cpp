// clfmetrics: evaluate a classifier from labels, probabilities or a
// confusion matrix, or compare two of them.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "clfmetrics/cli.hpp"

namespace {

using clfmetrics::cli::InputKind;

const std::map<std::string, InputKind> kKinds{
    {"labels", InputKind::Labels}, {"probs", InputKind::Probs}, {"matrix", InputKind::Matrix}};

struct CommonOptions {
  std::string format = "text";
  std::string weights;
  bool lenient = false;
  std::string reduce = "mean";
  double epsilon = 1e-15;
  std::string delimiter = "comma";
  bool has_header = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd.add_option("--weights", o.weights, "CSV of class,weight overrides for weighted balanced accuracy");
  cmd.add_flag("--lenient", o.lenient, "Average macro metrics over defined classes only");
  cmd.add_option("--reduce", o.reduce, "Cross-entropy reduction")->check(CLI::IsMember({"mean", "sum"}));
  cmd.add_option("--epsilon", o.epsilon, "Clipping floor for log arguments, in (0, 1e-6]");
  cmd.add_option("--delimiter", o.delimiter, "Field delimiter")->check(CLI::IsMember({"comma", "tab"}));
  cmd.add_flag("--has-header", o.has_header, "Label files start with a header row");
}

clfmetrics::cli::Flags to_flags(const CommonOptions& o) {
  clfmetrics::cli::Flags f;
  f.format = o.format == "json" ? clfmetrics::Format::Json : clfmetrics::Format::Text;
  if (!o.weights.empty()) f.weights_path = o.weights;
  f.lenient = o.lenient;
  f.reduce = o.reduce == "sum" ? clfmetrics::Reduce::Sum : clfmetrics::Reduce::Mean;
  f.epsilon = o.epsilon;
  f.delimiter = o.delimiter == "tab" ? '\t' : ',';
  f.has_header = o.has_header;
  f.color = std::getenv("CLFMETRICS_NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-class classification metrics"};
  app.set_version_flag("--version", std::string(clfmetrics::kToolVersion));
  app.require_subcommand(1);

  CommonOptions eval_opts;
  InputKind eval_kind = InputKind::Matrix;
  std::string eval_path;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one model");
  evaluate->add_option("--kind", eval_kind, "Input kind")
      ->required()
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  evaluate->add_option("input", eval_path, "Input file")->required();
  add_common(*evaluate, eval_opts);

  CommonOptions cmp_opts;
  InputKind cmp_kind = InputKind::Matrix;
  std::optional<InputKind> kind_a, kind_b;
  std::string path_a, path_b;
  auto* compare = app.add_subcommand("compare", "Compare two models, possibly on different datasets");
  auto* kind_opt = compare->add_option("--kind", cmp_kind, "Input kind for both sides")
                       ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  auto* kind_a_opt = compare->add_option("--kind-a", kind_a, "Input kind for side A")
                         ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  auto* kind_b_opt = compare->add_option("--kind-b", kind_b, "Input kind for side B")
                         ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  compare->add_option("a", path_a, "Side A input file")->required();
  compare->add_option("b", path_b, "Side B input file")->required();
  add_common(*compare, cmp_opts);

  try {
    app.parse(argc, argv);
    if (compare->parsed()) {
      if (kind_opt->count() == 0 && (kind_a_opt->count() == 0 || kind_b_opt->count() == 0))
        throw CLI::ValidationError("--kind (or both --kind-a and --kind-b) is required");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return clfmetrics::cli::kUsageError;
  }

  clfmetrics::cli::Result result;
  if (evaluate->parsed()) {
    result = clfmetrics::cli::cmd_evaluate({eval_path, eval_kind}, to_flags(eval_opts));
  } else {
    result = clfmetrics::cli::cmd_compare({path_a, kind_a.value_or(cmp_kind)}, {path_b, kind_b.value_or(cmp_kind)},
                                          to_flags(cmp_opts));
  }
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
