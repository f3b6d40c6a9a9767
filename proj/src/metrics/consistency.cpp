#include "hallubench/metrics/consistency.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "hallubench/util/concurrency.hpp"
#include "hallubench/util/error.hpp"

namespace hallubench::metrics {

HttpConsistencyScorer::HttpConsistencyScorer(std::string endpoint, std::shared_ptr<net::HttpTransport> transport,
                                             net::RetryPolicy policy, Sleeper sleeper, int max_concurrency)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      policy_(policy),
      sleeper_(std::move(sleeper)),
      max_concurrency_(std::max(1, max_concurrency)) {
  if (endpoint_.empty()) throw Error(ErrorCode::ConfigError, "consistency scorer endpoint is empty");
}

double HttpConsistencyScorer::score(const std::string& premise, const std::string& hypothesis) {
  net::HttpRequest request;
  request.method = "POST";
  request.url = endpoint_;
  request.headers["Content-Type"] = "application/json";
  request.body = Json{{"premise", premise}, {"hypothesis", hypothesis}}.dump();
  const auto response = net::send_with_retry(*transport_, request, policy_, sleeper_);
  if (response.status != 200) {
    throw Error(ErrorCode::NetworkError, "HTTP " + std::to_string(response.status) + " from " + endpoint_);
  }
  try {
    return Json::parse(response.body).at("score").get<double>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::MalformedResponse, "scorer reply lacks a numeric score: " + response.body.substr(0, 200));
  }
}

double LexicalOverlapScorer::score(const std::string& premise, const std::string& hypothesis) {
  auto words = [](const std::string& text) {
    std::set<std::string> out;
    std::string current;
    for (unsigned char c : text) {
      if (std::isalnum(c)) {
        current += static_cast<char>(std::tolower(c));
      } else if (!current.empty()) {
        out.insert(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) out.insert(std::move(current));
    return out;
  };
  const auto a = words(premise);
  const auto b = words(hypothesis);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& w : a) shared += b.count(w);
  return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

Json to_json(const ConsistencyScore& s) {
  return Json{{"smiles", s.smiles},
              {"generator_model", s.generator_model},
              {"consistency", s.consistency},
              {"hallucination_score", s.hallucination_score}};
}

double checked_consistency(double raw) {
  if (!std::isfinite(raw) || raw < -kScoreTolerance || raw > 1.0 + kScoreTolerance) {
    throw Error(ErrorCode::OutOfRange, "consistency score " + std::to_string(raw) + " outside [0, 1]");
  }
  return std::clamp(raw, 0.0, 1.0);
}

std::vector<ConsistencyScore> consistency_scores(ConsistencyScorer& scorer,
                                                 const std::vector<ConsistencyPair>& pairs) {
  std::vector<ConsistencyScore> out(pairs.size());
  parallel_for_index(pairs.size(), static_cast<std::size_t>(scorer.max_concurrency()), [&](std::size_t i) {
    const auto& p = pairs[i];
    const double consistency = checked_consistency(scorer.score(p.reference, p.candidate));
    out[i] = ConsistencyScore{p.smiles, p.generator_model, consistency, 1.0 - consistency};
  });
  return out;
}

}  // namespace hallubench::metrics
