#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hallubench/describe/description.hpp"
#include "hallubench/describe/pubchem.hpp"
#include "hallubench/util/error.hpp"
#include "support/fake_transport.hpp"
#include "support/pubchem_fixture.hpp"

using namespace hallubench;
using namespace hallubench::describe;

namespace {

const std::string kFixtures = std::string(HB_FIXTURE_DIR) + "/pubchem/";
const Clock kClock = fixed_clock("2024-05-01T00:00:00Z");

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "hallubench_test_describe";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << content;
  return path;
}

PubChemMetadata aspirin() {
  return {2244, "Aspirin", "C9H8O4", 180.16, 13, {"acetylsalicylic acid"}};
}

// Serves the recorded payloads for aspirin and 404 for everything else.
class RecordedPubChem : public net::HttpTransport {
 public:
  net::HttpResponse send(const net::HttpRequest& request) override {
    urls.push_back(request.url);
    if (request.url.find("/compound/smiles/CC%28%3DO%29Oc1ccccc1C%28%3DO%29O/property/") != std::string::npos) {
      return {200, read_file(kFixtures + "aspirin_properties.json"), {}, {}};
    }
    if (request.url.find("/compound/cid/2244/synonyms/JSON") != std::string::npos) {
      return {200, read_file(kFixtures + "aspirin_synonyms.json"), {}, {}};
    }
    return {404, read_file(kFixtures + "not_found.json"), {}, {}};
  }
  std::vector<std::string> urls;
};

}  // namespace

TEST_CASE("description prompt") {
  const auto prompt = build_description_prompt("CCO");
  CHECK(prompt.system == "You are an expert in drug discovery.");
  CHECK(prompt.user == "CCO Describe the molecule in natural language:");
  CHECK(build_description_prompt("c1ccccc1").system == prompt.system);
  CHECK(code_of([] { build_description_prompt(""); }) == ErrorCode::EmptyInput);
}

TEST_CASE("LLM descriptions are deterministic and cached") {
  auto backend = std::make_shared<llm::MockBackend>(42);
  llm::Gateway gateway(backend, std::make_shared<llm::ResponseCache>());
  const llm::GenerationParams params{"mock-llm"};
  const auto a = generate_description(gateway, "CCO", params, kClock);
  const auto b = generate_description(gateway, "CCO", params, kClock);
  CHECK(a == b);
  CHECK(gateway.backend_calls() == 1);
  CHECK(a.source == DescriptionSource::LLM);
  CHECK(a.model == "mock-llm");
  CHECK(a.temperature == doctest::Approx(0.6));
  CHECK_FALSE(a.text.empty());
  CHECK(a.created_at == "2024-05-01T00:00:00Z");

  llm::Gateway other(std::make_shared<llm::MockBackend>(42));
  CHECK(generate_description(other, "CCO", params, kClock).text == a.text);
}

TEST_CASE("network failure yields no record") {
  auto transport = std::make_shared<fake::ScriptedTransport>();
  transport->push(500, "down");
  llm::BackendConfig config;
  config.kind = llm::BackendKind::OpenAICompatible;
  config.base_url = "http://llm.test";
  config.retry_limit = 0;
  auto cache = std::make_shared<llm::ResponseCache>();
  llm::Gateway gateway(std::make_shared<llm::OpenAICompatibleBackend>(config, transport), cache);
  CHECK(code_of([&] { generate_description(gateway, "CCO", {"m"}, kClock); }) == ErrorCode::NetworkError);
  CHECK(cache->size() == 0);
}

TEST_CASE("description records round-trip through JSON") {
  const DescriptionRecord r{"CCO", DescriptionSource::LLM, "gpt-4o", 0.6, "An alcohol.", "t"};
  CHECK(description_from_json(to_json(r)) == r);
  const auto none = no_description("CCO", kClock);
  CHECK(none.text.empty());
  CHECK(description_from_json(to_json(none)) == none);
  auto bad = to_json(r);
  bad["text"] = "";
  CHECK_THROWS_AS(description_from_json(bad), Error);
  bad = to_json(r);
  bad["model"] = nullptr;
  CHECK_THROWS_AS(description_from_json(bad), Error);
  bad = to_json(r);
  bad.erase("smiles");
  CHECK(code_of([&] { description_from_json(bad); }) == ErrorCode::MissingField);
}

TEST_CASE("external description files") {
  const auto jsonl = write_temp("molt5.jsonl", R"({"smiles":"CCO","text":"The molecule is ethanol."}
{"smiles":"c1ccccc1","text":"The molecule is benzene."}
)");
  const auto loaded = load_external_descriptions(jsonl, DescriptionSource::MolT5, kClock);
  REQUIRE(loaded.records.size() == 2);
  CHECK(loaded.records[0].source == DescriptionSource::MolT5);
  CHECK(loaded.records[1].text == "The molecule is benzene.");

  const auto csv = write_temp("molt5.csv", "smiles,text\nCCO,An alcohol.\nCC,\"  \"\nCCN,\"An amine, small.\"\n");
  const auto from_csv = load_external_descriptions(csv, DescriptionSource::MolT5, kClock);
  CHECK(from_csv.records.size() == 2);
  CHECK(from_csv.skipped_empty == 1);
  CHECK(from_csv.records[1].text == "An amine, small.");

  const auto no_text = write_temp("bad.csv", "smiles,description\nCCO,x\n");
  CHECK(code_of([&] { load_external_descriptions(no_text, DescriptionSource::MolT5, kClock); }) ==
        ErrorCode::MissingColumn);
  CHECK(code_of([&] {
          load_external_descriptions(write_temp("missing.jsonl", "").parent_path() / "nope.jsonl",
                                     DescriptionSource::MolT5, kClock);
        }) == ErrorCode::FileUnreadable);
}

TEST_CASE("PubChem fetch from recorded payloads") {
  auto transport = std::make_shared<RecordedPubChem>();
  auto cache = std::make_shared<llm::ResponseCache>();
  PubChemClient client(transport, "https://pubchem.test/rest/pug/", cache);
  const auto meta = client.fetch("CC(=O)Oc1ccccc1C(=O)O");
  REQUIRE(meta.has_value());
  CHECK(meta->cid == 2244);
  CHECK(meta->name == "Aspirin");
  CHECK(meta->formula == "C9H8O4");
  CHECK(meta->weight == doctest::Approx(180.16));
  CHECK(meta->heavy_atom_count == 13);
  REQUIRE(meta->synonyms.size() == 1);
  CHECK(meta->synonyms[0] == "acetylsalicylic acid");
  CHECK(transport->urls[0] ==
        "https://pubchem.test/rest/pug/compound/smiles/CC%28%3DO%29Oc1ccccc1C%28%3DO%29O/property/"
        "MolecularFormula,MolecularWeight,HeavyAtomCount,Title/JSON");
  CHECK(pubchem_description(*meta) ==
        "This compound, known as Aspirin, has the molecular formula C9H8O4, a molecular weight of 180.16 g/mol, and "
        "13 heavy atoms. It is also known as acetylsalicylic acid.");

  const auto requests = transport->urls.size();
  CHECK(client.fetch("CC(=O)Oc1ccccc1C(=O)O").has_value());
  CHECK_FALSE(client.fetch("CCCCCCCCCCCCCCCCCCCCCCCCCCCCCO").has_value());
  CHECK_FALSE(client.fetch("CCCCCCCCCCCCCCCCCCCCCCCCCCCCCO").has_value());
  CHECK(transport->urls.size() == requests + 1);
}

TEST_CASE("PubChem malformed and failing responses") {
  auto transport = std::make_shared<fake::ScriptedTransport>();
  transport->push(200, "{broken");
  transport->push(200, R"({"PropertyTable":{"Properties":[{"CID":1,"MolecularWeight":"x"}]}})");
  transport->push(400, "bad request");
  PubChemClient client(transport, "https://pubchem.test/rest/pug", nullptr, {0, std::chrono::milliseconds(1)});
  CHECK(code_of([&] { client.fetch("CCO"); }) == ErrorCode::MalformedResponse);
  CHECK(code_of([&] { client.fetch("CCO"); }) == ErrorCode::MalformedResponse);
  CHECK(code_of([&] { client.fetch("CCO"); }) == ErrorCode::NetworkError);
}

TEST_CASE("PubChem template") {
  auto meta = aspirin();
  CHECK(pubchem_description(meta) ==
        "This compound, known as Aspirin, has the molecular formula C9H8O4, a molecular weight of 180.16 g/mol, and "
        "13 heavy atoms. It is also known as acetylsalicylic acid.");
  CHECK(pubchem_description(meta) == pubchem_description(meta));
  meta.synonyms.clear();
  CHECK(pubchem_description(meta) ==
        "This compound, known as Aspirin, has the molecular formula C9H8O4, a molecular weight of 180.16 g/mol, and "
        "13 heavy atoms.");
  meta.synonyms = {"a", "b", "c", "d"};
  meta.weight = 180.1591;
  CHECK(pubchem_description(meta) ==
        "This compound, known as Aspirin, has the molecular formula C9H8O4, a molecular weight of 180.16 g/mol, and "
        "13 heavy atoms. It is also known as a, b, c.");
}

TEST_CASE("formula cross-check") {
  CHECK(formula_matches("CC(=O)Oc1ccccc1C(=O)O", aspirin()));
  auto wrong = aspirin();
  wrong.formula = "C9H10O4";
  CHECK_FALSE(formula_matches("CC(=O)Oc1ccccc1C(=O)O", wrong));
  CHECK_FALSE(formula_matches("C1CC", aspirin()));
  CHECK(formula_matches("C[N+](C)(C)C", {1, "tetramethylammonium", "C4H12N+", 74.14, 5, {}}));
}

TEST_CASE("fixture transport serves coverage gaps as not found") {
  auto fixture = std::make_shared<fake::PubChemFixture>();
  fixture->add("CCO", {702, "Ethanol", "C2H6O", 46.07, 3, {"ethyl alcohol", "Ethanol"}});
  PubChemClient client(fixture, "https://pubchem.test/rest/pug");
  const auto meta = client.fetch("CCO");
  REQUIRE(meta.has_value());
  CHECK(meta->synonyms == std::vector<std::string>{"ethyl alcohol"});
  CHECK_FALSE(client.fetch("CCN").has_value());
}

TEST_CASE("percent encoding") {
  CHECK(percent_encode("C/C=C\\C") == "C%2FC%3DC%5CC");
  CHECK(percent_encode("[NH4+]") == "%5BNH4%2B%5D");
  CHECK(percent_encode("c1ccccc1") == "c1ccccc1");
}
