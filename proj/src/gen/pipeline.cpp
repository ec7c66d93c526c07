#include "retrokit/gen/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <memory>
#include <semaphore>
#include <thread>

#include "json.hpp"
#include <spdlog/spdlog.h>

#include "retrokit/chem/reaction.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/gen/bounded_queue.hpp"

namespace retrokit::gen {
namespace {

using json = nlohmann::json;

struct VariantTask {
  std::shared_ptr<const rationale::Rationale> rationale;
  std::string id;
  std::string rxn;
  int variant = 0;
};

struct Shared {
  std::atomic<long> completed{0};
  std::atomic<long> truncated{0};
  std::atomic<long> failed{0};
  std::atomic<int> in_flight{0};
  std::atomic<int> max_in_flight{0};
  std::atomic<int> max_per_consumer{0};
  std::mutex sink_mu;
  std::mutex error_mu;
  std::exception_ptr fatal;
  std::atomic<bool> stop{false};
};

void raise_max(std::atomic<int>& target, int value) {
  int cur = target.load();
  while (value > cur && !target.compare_exchange_weak(cur, value)) {
  }
}

}  // namespace

JsonlCheckpointSink::JsonlCheckpointSink(const std::string& path) : path_(path) {
  std::ofstream probe(path_, std::ios::app);
  if (!probe) throw Error("cannot open checkpoint " + path_);
}

void JsonlCheckpointSink::write(const VariantResult& v) {
  std::ofstream out(path_, std::ios::app);
  const json line = {{"id", v.id},
                     {"rxn", v.rxn},
                     {"variant", v.variant},
                     {"links", {{"l12", v.links.l12}, {"l23", v.links.l23}, {"l34", v.links.l34}}}};
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw Error("write to checkpoint " + path_ + " failed");
}

std::vector<VariantResult> read_checkpoint(const std::string& path) {
  std::vector<VariantResult> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      VariantResult v;
      v.id = j.at("id").get<std::string>();
      v.rxn = j.value("rxn", "");
      v.variant = j.at("variant").get<int>();
      const auto& l = j.at("links");
      v.links = {l.value("l12", ""), l.value("l23", ""), l.value("l34", "")};
      out.push_back(std::move(v));
    } catch (const json::exception&) {
      // A torn last line from an interrupted run is ignored.
      spdlog::warn("skipping unreadable checkpoint line in {}", path);
    }
  }
  return out;
}

GenReport run_pipeline(const std::vector<InputRecord>& records, const GenConfig& config, TextGenerator& generator,
                       VariantSink& sink, const PipelineOptions& options) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  GenReport report;
  BoundedQueue<VariantTask> queue(static_cast<std::size_t>(config.queue_capacity));
  Shared shared;

  auto fail = [&](std::exception_ptr e) {
    std::lock_guard lock(shared.error_mu);
    if (!shared.fatal) shared.fatal = e;
    shared.stop = true;
    queue.close();
  };

  std::thread producer([&] {
    for (const auto& rec : records) {
      if (shared.stop) break;
      ++report.records_in;
      std::shared_ptr<const rationale::Rationale> r;
      try {
        const auto mapped = chem::bind_atom_maps(chem::parse_rxn(rec.rxn, rec.id));
        r = std::make_shared<const rationale::Rationale>(rationale::build_rationale(mapped, options.patterns));
      } catch (const Error& e) {
        ++report.dropped_mapping_failure;
        spdlog::warn("record {} dropped: {}", rec.id, e.what());
        continue;
      }
      for (int v = 0; v < config.variants_per_instance; ++v) {
        if (options.done.count({rec.id, v})) {
          ++report.skipped_from_checkpoint;
          continue;
        }
        ++report.produced;
        if (!queue.push(VariantTask{r, rec.id, rec.rxn, v})) return;
      }
    }
    queue.close();
  });

  auto run_task = [&](const VariantTask& task) {
    std::function<void(rationale::LinkSlot)> hook;
    if (options.on_request) {
      hook = [&](rationale::LinkSlot slot) { options.on_request(task.id, task.variant, slot); };
    }
    const auto res = rationale::generate_variant(*task.rationale, task.rxn, task.variant, generator, config, hook);
    switch (res.status) {
      case rationale::VariantStatus::Ok:
        try {
          std::lock_guard lock(shared.sink_mu);
          sink.write(VariantResult{task.id, task.rxn, task.variant, res.links});
          ++shared.completed;
        } catch (...) {
          fail(std::current_exception());
        }
        break;
      case rationale::VariantStatus::Truncated: ++shared.truncated; break;
      case rationale::VariantStatus::Failed: ++shared.failed; break;
    }
  };

  auto consumer = [&] {
    const int k = config.per_consumer_concurrency;
    std::counting_semaphore<> slots(k);
    std::atomic<int> active{0};
    struct Worker {
      std::thread thread;
      std::shared_ptr<std::atomic<bool>> done;
    };
    std::vector<Worker> workers;
    auto reap = [&](bool all) {
      for (auto it = workers.begin(); it != workers.end();) {
        if (all || it->done->load()) {
          it->thread.join();
          it = workers.erase(it);
        } else {
          ++it;
        }
      }
    };
    while (true) {
      slots.acquire();
      auto task = queue.pop();
      if (!task) {
        slots.release();
        break;
      }
      reap(false);
      raise_max(shared.max_per_consumer, ++active);
      raise_max(shared.max_in_flight, ++shared.in_flight);
      auto done = std::make_shared<std::atomic<bool>>(false);
      workers.push_back({std::thread([&, t = std::move(*task), done] {
                           run_task(t);
                           --shared.in_flight;
                           --active;
                           slots.release();
                           done->store(true);
                         }),
                         done});
    }
    reap(true);
  };

  std::vector<std::thread> consumers;
  for (int c = 0; c < config.consumers; ++c) consumers.emplace_back(consumer);
  producer.join();
  for (auto& c : consumers) c.join();

  if (shared.fatal) std::rethrow_exception(shared.fatal);

  report.completed = shared.completed;
  report.dropped_truncation = shared.truncated;
  report.dropped_error = shared.failed;
  report.in_flight_at_end = shared.in_flight;
  report.max_queue_depth = queue.max_depth();
  report.max_in_flight = shared.max_in_flight;
  report.max_in_flight_per_consumer = shared.max_per_consumer;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.throughput = report.seconds > 0 ? static_cast<double>(report.completed) / report.seconds : 0.0;
  return report;
}

}  // namespace retrokit::gen
