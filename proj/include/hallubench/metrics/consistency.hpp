#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hallubench/net/http.hpp"
#include "hallubench/util/io.hpp"

namespace hallubench::metrics {

class ConsistencyScorer {
 public:
  virtual ~ConsistencyScorer() = default;
  // Raw score for how well `hypothesis` is supported by `premise`.
  virtual double score(const std::string& premise, const std::string& hypothesis) = 0;
  virtual int max_concurrency() const noexcept { return 4; }
};

// POSTs {"premise", "hypothesis"} to `endpoint` and reads {"score"}.
class HttpConsistencyScorer : public ConsistencyScorer {
 public:
  HttpConsistencyScorer(std::string endpoint, std::shared_ptr<net::HttpTransport> transport,
                        net::RetryPolicy policy = {}, Sleeper sleeper = real_sleeper(), int max_concurrency = 4);
  double score(const std::string& premise, const std::string& hypothesis) override;
  int max_concurrency() const noexcept override { return max_concurrency_; }

 private:
  std::string endpoint_;
  std::shared_ptr<net::HttpTransport> transport_;
  net::RetryPolicy policy_;
  Sleeper sleeper_;
  int max_concurrency_;
};

// Offline stand-in: Jaccard overlap of lower-cased word sets.
class LexicalOverlapScorer : public ConsistencyScorer {
 public:
  double score(const std::string& premise, const std::string& hypothesis) override;
};

struct ConsistencyPair {
  std::string smiles;
  std::string generator_model;
  std::string reference;
  std::string candidate;
};

struct ConsistencyScore {
  std::string smiles;
  std::string generator_model;
  double consistency = 0.0;
  double hallucination_score = 1.0;

  bool operator==(const ConsistencyScore&) const = default;
};

Json to_json(const ConsistencyScore& s);

inline constexpr double kScoreTolerance = 1e-6;

// Checks a raw score: values within kScoreTolerance of [0, 1] are clamped,
// anything further out throws OutOfRange.
double checked_consistency(double raw);

// Scores every pair concurrently; results keep input order.
std::vector<ConsistencyScore> consistency_scores(ConsistencyScorer& scorer, const std::vector<ConsistencyPair>& pairs);

}  // namespace hallubench::metrics
