#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "priorshift/dataset_io.hpp"
#include "priorshift/diagnostics.hpp"
#include "priorshift/experiment.hpp"
#include "priorshift/ground_truth.hpp"
#include "priorshift/kernel_classifier.hpp"
#include "priorshift/metrics.hpp"
#include "priorshift/toydata.hpp"
#include "priorshift/ulsif.hpp"
#include "priorshift/weights.hpp"

namespace {

using namespace priorshift;

// "1..10" (inclusive range) or a comma list "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto range = text.find("..");
  if (range != std::string::npos) {
    std::uint64_t lo = std::stoull(text.substr(0, range));
    std::uint64_t hi = std::stoull(text.substr(range + 2));
    if (hi < lo) throw std::invalid_argument("seed range is empty: " + text);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      seeds.push_back(std::stoull(item));
    }
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds in: " + text);
  return seeds;
}

std::vector<double> parse_prior(const std::string& text) {
  std::vector<double> probs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) probs.push_back(std::stod(item));
  return probs;
}

std::string default_output_dir(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("PRIORSHIFT_OUTPUT_DIR")) return env;
  return "results";
}

AttributePrior prior_or_empirical(const std::string& text, const Dataset& data) {
  AttributePrior p;
  if (text.empty()) return empirical_attribute_prior(data);
  p.probs = parse_prior(text);
  p.validate();
  return p;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Attribute-based instance weighting for domain adaptation"};
  app.require_subcommand(1);

  // ---- gen-toy ----------------------------------------------------------
  auto* gen = app.add_subcommand("gen-toy", "Generate a built-in or custom dataset");
  std::string gen_spec = "toy-A", gen_domain = "source", gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--spec", gen_spec,
                  "toy-A|toy-B|toy-C|overlap-small|overlap-large or a spec JSON file");
  gen->add_option("--domain", gen_domain, "source|target");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output dataset CSV path")->required();
  gen->callback([&] {
    Dataset data;
    if (gen_spec == "overlap-small" || gen_spec == "overlap-large") {
      if (gen_domain != "source")
        throw std::invalid_argument(
            "[gen-toy] the overlap demos are source-only datasets");
      OverlapConfig cfg = builtin_overlap_config(gen_spec);
      data = generate_overlap_demo(cfg.mean_separation, cfg.prior_source,
                                   cfg.prior_target, cfg.n, gen_seed);
    } else {
      Domain domain;
      if (gen_domain == "source")
        domain = Domain::Source;
      else if (gen_domain == "target")
        domain = Domain::Target;
      else
        throw std::invalid_argument("[gen-toy] unknown domain '" + gen_domain +
                                    "' (expected source or target)");
      ToySpec spec = builtin_toy_spec_or_file(gen_spec, gen_seed);
      data = generate_toy(spec, domain);
    }
    save_dataset(data, gen_out);
    std::cout << "wrote " << data.size() << " samples to " << gen_out << "\n";
  });

  // ---- estimate ---------------------------------------------------------
  auto* est = app.add_subcommand("estimate", "Estimate importance weights");
  std::string est_method = "attribute", est_source, est_target, est_spec,
              est_prior_s, est_prior_t, est_out;
  int est_k = 0;
  std::uint64_t est_seed = 1;
  est->add_option("--method", est_method,
                  "attribute|straightforward|ulsif|ground-truth");
  est->add_option("--source", est_source, "source dataset CSV")->required();
  est->add_option("--target", est_target, "target dataset CSV (ulsif)");
  est->add_option("--spec", est_spec, "toy spec name or file (ground-truth)");
  est->add_option("--prior-source", est_prior_s,
                  "comma list p(z|source); default empirical");
  est->add_option("--prior-target", est_prior_t,
                  "comma list p(z|target); default empirical from --target");
  est->add_option("--k", est_k, "k-NN neighborhood size (0 = ceil(sqrt(n)))");
  est->add_option("--seed", est_seed, "seed (ulsif basis selection)");
  est->add_option("--out", est_out, "output weights CSV")->required();
  est->callback([&] {
    Dataset source = load_dataset(est_source);
    Method method = method_from_name(est_method);
    WeightVector w;
    if (method == Method::Attribute || method == Method::Straightforward) {
      AttributePrior ps = prior_or_empirical(est_prior_s, source);
      AttributePrior pt;
      if (!est_prior_t.empty()) {
        pt.probs = parse_prior(est_prior_t);
        pt.validate();
      } else if (!est_target.empty()) {
        pt = empirical_attribute_prior(load_dataset(est_target));
      } else {
        throw std::invalid_argument(
            "[estimate] need --prior-target or --target for the target prior");
      }
      if (method == Method::Attribute) {
        int k = est_k > 0 ? est_k : default_knn_k(source.size());
        w = estimate_weights(source, ps, pt, k);
      } else {
        w = straightforward_weights(source, ps, pt);
      }
    } else if (method == Method::Ulsif) {
      if (est_target.empty())
        throw std::invalid_argument("[estimate] ulsif requires --target");
      Dataset target = load_dataset(est_target);
      UlsifModel model = fit_ulsif(
          source, target, kDefaultUlsifBasis,
          default_ulsif_sigma_grid(median_pairwise_distance(source, target)),
          default_ulsif_lambda_grid(), est_seed);
      w = predict_ulsif(model, source);
    } else if (method == Method::GroundTruth) {
      if (est_spec.empty())
        throw std::invalid_argument("[estimate] ground-truth requires --spec");
      ToySpec spec = builtin_toy_spec_or_file(est_spec, est_seed);
      w = ground_truth_weights(spec, source);
    } else {
      w.weights.assign(source.size(), 1.0);
    }
    save_weights(w, est_out);
    std::cout << "wrote " << w.size() << " weights to " << est_out << "\n";
  });

  // ---- train ------------------------------------------------------------
  auto* train = app.add_subcommand("train", "Train the weighted kernel classifier");
  std::string train_source, train_weights, train_out;
  std::uint64_t train_seed = 1;
  std::vector<double> train_widths, train_regs;
  int train_folds = 5;
  train->add_option("--source", train_source, "training dataset CSV")->required();
  train->add_option("--weights", train_weights,
                    "weights CSV (omitted = unit weights)");
  train->add_option("--seed", train_seed, "cross-validation fold seed");
  train->add_option("--widths", train_widths, "kernel width grid override");
  train->add_option("--regs", train_regs, "regularization grid override");
  train->add_option("--folds", train_folds, "cross-validation folds");
  train->add_option("--out", train_out, "output model JSON")->required();
  train->callback([&] {
    Dataset source = load_dataset(train_source);
    WeightVector w;
    if (train_weights.empty())
      w.weights.assign(source.size(), 1.0);
    else
      w = load_weights(train_weights);
    CvGrid grid = default_cv_grid(median_pairwise_distance(source));
    if (!train_widths.empty()) grid.widths = train_widths;
    if (!train_regs.empty()) grid.regs = train_regs;
    grid.folds = train_folds;
    KernelModel model = train_weighted(source, w, grid, train_seed);
    save_model(model, train_out);
    std::cout << "trained model (kernel_width " << model.kernel_width
              << ", regularization " << model.regularization << ") -> "
              << train_out << "\n";
  });

  // ---- eval -------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Evaluate a trained model");
  std::string eval_model, eval_data;
  eval->add_option("--model", eval_model, "model JSON")->required();
  eval->add_option("--data", eval_data, "labeled dataset CSV")->required();
  eval->callback([&] {
    KernelModel model = load_model(eval_model);
    Dataset data = load_dataset(eval_data);
    std::cout << "accuracy " << accuracy(model, data) << " on " << data.size()
              << " samples\n";
  });

  // ---- diagnose ---------------------------------------------------------
  auto* diag = app.add_subcommand(
      "diagnose", "Check the shared-conditional assumption per attribute class");
  std::string diag_source, diag_target;
  std::uint64_t diag_seed = 1;
  diag->add_option("--source", diag_source, "source dataset CSV")->required();
  diag->add_option("--target", diag_target, "target dataset CSV")->required();
  diag->add_option("--seed", diag_seed, "fold-split seed");
  diag->callback([&] {
    Dataset source = load_dataset(diag_source);
    Dataset target = load_dataset(diag_target);
    auto aucs = assumption_diagnostic(source, target, diag_seed);
    for (std::size_t z = 0; z < aucs.size(); ++z) {
      std::cout << "class " << z << ": ";
      if (aucs[z])
        std::cout << "domain-classifier AUC " << *aucs[z] << "\n";
      else
        std::cout << "undefined (class empty in one domain)\n";
    }
  });

  // ---- reproduce --------------------------------------------------------
  auto* rep = app.add_subcommand("reproduce",
                                 "Re-create the reference tables and figures");
  std::string rep_what, rep_seeds = "1..10", rep_out;
  rep->add_option("what", rep_what, "table2|table3|fig2|fig3|fig5")->required();
  rep->add_option("--seeds", rep_seeds, "seed list, e.g. 1..10 or 1,2,3");
  rep->add_option("--out", rep_out, "output directory (default $PRIORSHIFT_OUTPUT_DIR or ./results)");
  rep->callback([&] {
    std::string out = default_output_dir(rep_out);
    std::vector<std::uint64_t> seeds = parse_seeds(rep_seeds);
    if (rep_what == "table2") {
      Table2Result r = reproduce_table2(seeds, out);
      for (std::size_t i = 0; i < r.datasets.size(); ++i)
        std::cout << r.datasets[i] << ": attribute RMSE " << r.attribute_mean[i]
                  << ", ulsif RMSE " << r.ulsif_mean[i] << "\n";
    } else if (rep_what == "table3") {
      Table3Result r = reproduce_table3(seeds, out);
      for (std::size_t i = 0; i < r.datasets.size(); ++i)
        std::cout << r.datasets[i] << ": unweighted " << r.unweighted_mean[i]
                  << ", estimated " << r.estimated_mean[i] << ", ground-truth "
                  << r.ground_truth_mean[i] << "\n";
    } else if (rep_what == "fig2") {
      reproduce_fig2(seeds.front(), out);
      std::cout << "wrote " << out << "/fig2\n";
    } else if (rep_what == "fig3") {
      reproduce_fig3(seeds.front(), out);
      std::cout << "wrote " << out << "/fig3\n";
    } else if (rep_what == "fig5") {
      reproduce_fig5(seeds.front(), out);
      std::cout << "wrote " << out << "/fig5\n";
    } else {
      throw std::invalid_argument("[reproduce] unknown target '" + rep_what +
                                  "' (expected table2, table3, fig2, fig3, or fig5)");
    }
  });

  // ---- run --------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string run_config_path;
  run->add_option("--config", run_config_path, "RunConfig JSON")->required();
  run->callback([&] {
    RunConfig config = load_run_config(run_config_path);
    config.output_dir = default_output_dir(config.output_dir);
    RunResult result = run_experiment(config);
    for (const SeedRecord& r : result.records) {
      std::cout << "seed " << r.seed << ": target accuracy " << r.target_accuracy
                << ", source accuracy " << r.source_accuracy;
      if (r.rmse) std::cout << ", weight RMSE " << *r.rmse;
      std::cout << " (" << r.wall_time_seconds << "s)\n";
    }
    std::cout << "mean target accuracy " << result.target_accuracy_mean << "\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
