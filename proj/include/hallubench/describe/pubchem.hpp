#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hallubench/llm/cache.hpp"
#include "hallubench/net/http.hpp"

namespace hallubench::describe {

struct PubChemMetadata {
  long long cid = 0;
  std::string name;
  std::string formula;
  double weight = 0.0;
  int heavy_atom_count = 0;
  std::vector<std::string> synonyms;
};

std::string percent_encode(std::string_view text);

// PUG REST client. Responses (including not-found) are cached by URL when a
// cache is supplied.
class PubChemClient {
 public:
  PubChemClient(std::shared_ptr<net::HttpTransport> transport,
                std::string base_url = "https://pubchem.ncbi.nlm.nih.gov/rest/pug",
                std::shared_ptr<llm::ResponseCache> cache = nullptr, net::RetryPolicy policy = {},
                Sleeper sleeper = real_sleeper());

  // nullopt when PubChem has no compound for the SMILES. Throws NetworkError
  // or MalformedResponse.
  std::optional<PubChemMetadata> fetch(const std::string& smiles);

 private:
  // Returns {status, body}, consulting the cache first.
  std::pair<int, std::string> get(const std::string& url);

  std::shared_ptr<net::HttpTransport> transport_;
  std::string base_url_;
  std::shared_ptr<llm::ResponseCache> cache_;
  net::RetryPolicy policy_;
  Sleeper sleeper_;
};

// "This compound, known as {name}, has the molecular formula {formula}, a
// molecular weight of {weight:.2f} g/mol, and {n} heavy atoms." followed by
// "It is also known as {up to three synonyms}." when any synonym remains.
std::string pubchem_description(const PubChemMetadata& meta);

// Compares the locally computed formula with PubChem's and logs a warning on
// mismatch. Returns false on mismatch or when the SMILES does not parse.
bool formula_matches(const std::string& smiles, const PubChemMetadata& meta);

}  // namespace hallubench::describe
