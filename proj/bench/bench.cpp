// Serial vs OpenMP timings for the two data-parallel kernels: sample-set
// evaluation and batch rarity scoring.
//
//   bench [--instances N] [--samples K] [--repeat R] [--threads T]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/reaction.hpp"
#include "retrokit/cli/io.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/eval/metrics.hpp"
#include "retrokit/eval/rarity.hpp"
#include "retrokit/retro/template.hpp"
#include "retrokit/rlvr/forward_model.hpp"

using namespace retrokit;

namespace {

double best_of(int repeat, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel timings"};
  int instances = 400, samples = 16, repeat = 3, threads = 0;
  app.add_option("--instances", instances, "Sample sets to evaluate")->check(CLI::PositiveNumber);
  app.add_option("--samples", samples, "Samples per set")->check(CLI::PositiveNumber);
  app.add_option("--repeat", repeat, "Timed repetitions; the best is reported")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (default: runtime choice)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const auto records = cli::read_reaction_records(std::string(RETROKIT_DATA_DIR) + "/desk_corpus.rxn");
  retro::TemplateLibrary library;
  std::vector<std::string> products, labels;
  for (const auto& r : records) {
    const auto mr = chem::bind_atom_maps(chem::parse_rxn(r.rxn, r.id));
    try {
      library.add(retro::extract_template(mr).canonical_form);
    } catch (const Error&) {
    }
    std::string label;
    for (const auto& p : mr.precursors()) label += (label.empty() ? "" : ".") + chem::canonical_smiles(p);
    products.push_back(chem::canonical_smiles(mr.product()));
    labels.push_back(label);
  }

  std::mt19937_64 rng(1);
  std::vector<eval::SampleSet> sets;
  for (int i = 0; i < instances; ++i) {
    const std::size_t r = rng() % products.size();
    eval::SampleSet s{"b" + std::to_string(i), products[r], labels[r], labels[r], {}};
    for (int k = 0; k < samples; ++k) s.samples.push_back(rng() % 3 ? labels[rng() % labels.size()] : labels[r]);
    sets.push_back(std::move(s));
  }

  std::printf("threads: %d, instances: %d x %d samples, %zu templates\n", omp_get_max_threads(), instances, samples,
              library.size());
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial s", "openmp s", "speedup");

  rlvr::TemplateOracle fwd(library);
  std::vector<eval::InstanceOutcome> a, b;
  const double tp = best_of(repeat, [&] { b = eval::evaluate_instances(sets, fwd, nullptr, samples); });
  const double ts = best_of(repeat, [&] { a = eval::evaluate_instances_serial(sets, fwd, nullptr, samples); });
  row("evaluate_instances", ts, tp);
  const auto ms = eval::summarize(a, samples);
  const auto mp = eval::summarize(b, samples);
  if (ms.feasible_ratio != mp.feasible_ratio || ms.template_diversity != mp.template_diversity) {
    std::fprintf(stderr, "serial and parallel evaluation disagree\n");
    return 1;
  }

  std::vector<std::string> pool;
  for (int i = 0; i < 200; ++i) pool.insert(pool.end(), products.begin(), products.end());
  const auto model = eval::build_rarity_model(products, 3);
  std::vector<double> sa, sb;
  const double rs = best_of(repeat, [&] { sa = eval::score_instances_serial(pool, model); });
  const double rp = best_of(repeat, [&] { sb = eval::score_instances(pool, model); });
  row("score_instances", rs, rp);
  if (sa != sb) {
    std::fprintf(stderr, "serial and parallel rarity scores disagree\n");
    return 1;
  }
  return 0;
}
