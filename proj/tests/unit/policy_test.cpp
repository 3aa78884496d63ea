#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <thread>

#include "molrl/policy.hpp"

namespace {

using namespace molrl;
using policy::GenerationRequest;

TEST(Mock, ReturnsScriptVerbatim) {
  auto mock = policy::MockPolicy::fixed("fixed text");
  const auto c = mock.complete({"sys", "user"});
  EXPECT_EQ(c.text, "fixed text");
  EXPECT_EQ(c.log_prob, 0.0);
  EXPECT_EQ(mock.complete_many({{"a", "b"}, {"c", "d"}}).size(), 2u);
  EXPECT_EQ(mock.calls(), 3u);
}

TEST(Mock, ScriptSeesCallIndex) {
  policy::MockPolicy mock([](const GenerationRequest& r, std::size_t i) { return r.user + std::to_string(i); });
  EXPECT_EQ(mock.complete({"", "x"}).text, "x0");
  EXPECT_EQ(mock.complete({"", "y"}).text, "y1");
}

class ToyTest : public ::testing::Test {
 protected:
  policy::ToyPolicy toy{7};
};

TEST_F(ToyTest, GreedyPicksArgmaxLowestOnTies) {
  const auto p = toy.add_prompt("k", {"a", "b", "c"}, {0.1, 2.0, 2.0});
  Rng rng(0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(toy.sample(p, 0.0, rng).index, 1u);
  EXPECT_EQ(toy.complete_prompt(p, 0.0, rng).text, "b");
}

TEST_F(ToyTest, SoftmaxValues) {
  const auto even = toy.add_prompt("even", {"a", "b"}, {0, 0});
  const auto skew = toy.add_prompt("skew", {"a", "b"}, {std::log(3.0), 0});
  EXPECT_DOUBLE_EQ(toy.probabilities(even, 1.0)[0], 0.5);
  EXPECT_NEAR(toy.probabilities(skew, 1.0)[0], 0.75, 1e-15);
  EXPECT_NEAR(toy.probabilities(skew, 1.0)[1], 0.25, 1e-15);
  EXPECT_NEAR(toy.log_prob(skew, 1, 1.0), std::log(0.25), 1e-15);
  EXPECT_NEAR(toy.probabilities(skew, 0.5)[0], 0.9, 1e-15);
}

TEST_F(ToyTest, ProbabilitiesSumToOne) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> z(1 + rng.below(40));
    for (double& v : z) v = (rng.uniform() - 0.5) * 400;
    const auto p = toy.add_prompt("p" + std::to_string(i), std::vector<std::string>(z.size(), "x"), z);
    for (double t : {0.1, 0.9, 1.0, 3.0}) {
      const auto probs = toy.probabilities(p, t);
      EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST_F(ToyTest, EmpiricalFrequencies) {
  const auto p = toy.add_prompt("k", {"a", "b", "c"}, {1.0, 0.0, -0.5});
  const auto expected = toy.probabilities(p, 0.9);
  std::vector<double> counts(3, 0);
  Rng rng(11);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto s = toy.sample(p, 0.9, rng);
    counts[s.index] += 1;
    ASSERT_NEAR(s.log_prob, std::log(expected[s.index]), 1e-12);
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(counts[i] / n, expected[i], 0.01);
}

TEST_F(ToyTest, SeededSamplingIsReproducible) {
  const auto p = toy.add_prompt("k", {"a", "b", "c", "d"});
  Rng a(5), b(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(toy.sample(p, 1.0, a).index, toy.sample(p, 1.0, b).index);
}

TEST_F(ToyTest, CompleteRoutesByPromptKey) {
  toy.add_prompt(policy::ToyPolicy::prompt_key("sys", "user"), {"only"});
  const auto c = toy.complete({"sys", "user", 0.9, 100, 1});
  EXPECT_EQ(c.text, "only");
  EXPECT_EQ(c.candidate, 0u);
  EXPECT_NEAR(*c.log_prob, 0.0, 1e-15);
  EXPECT_THROW(toy.complete({"sys", "other"}), policy::UnknownPrompt);
}

TEST_F(ToyTest, ReferenceFreezesOnce) {
  const auto p = toy.add_prompt("k", {"a", "b"});
  toy.freeze_reference();
  toy.mutable_logits(p)[0] = 2.0;
  EXPECT_EQ(toy.reference_logits(p), (std::vector<double>{0, 0}));
  EXPECT_THROW(toy.freeze_reference(), std::logic_error);
}

class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  policy::EndpointConfig config() const {
    policy::EndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    cfg.model = "stub";
    cfg.timeout_seconds = 5;
    cfg.max_attempts = 3;
    cfg.api_key_env = "MOLRL_TEST_UNSET_KEY";
    return cfg;
  }

  std::atomic<int> hits{0};

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

std::string reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

auto no_sleep = [](std::chrono::milliseconds) {};

TEST(Http, EchoesUserMessage) {
  StubServer stub([](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    res.set_content(reply(body["messages"][1]["content"].get<std::string>() + "|" + body["model"].get<std::string>()),
                    "application/json");
  });
  policy::HttpPolicy http(stub.config(), no_sleep);
  EXPECT_EQ(http.complete({"sys", "hello"}).text, "hello|stub");
  const auto many = http.complete_many({{"s", "a"}, {"s", "b"}, {"s", "c"}, {"s", "d"}, {"s", "e"}});
  ASSERT_EQ(many.size(), 5u);
  EXPECT_EQ(many[4].text, "e|stub");
}

TEST(Http, RetriesTransientFailures) {
  std::vector<std::chrono::milliseconds> sleeps;
  StubServer stub([&](const httplib::Request&, httplib::Response& res) {
    if (stub.hits <= 2) {
      res.status = stub.hits == 1 ? 503 : 429;
      return;
    }
    res.set_content(reply("ok"), "application/json");
  });
  policy::HttpPolicy http(stub.config(), [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
  EXPECT_EQ(http.complete({"s", "u"}).text, "ok");
  EXPECT_EQ(stub.hits, 3);
  ASSERT_EQ(sleeps.size(), 2u);
  EXPECT_EQ(sleeps[1], 2 * sleeps[0]);
}

TEST(Http, ClientErrorIsNotRetried) {
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.status = 400; });
  policy::HttpPolicy http(stub.config(), no_sleep);
  EXPECT_THROW(http.complete({"s", "u"}), policy::PolicyUnavailable);
  EXPECT_EQ(stub.hits, 1);
}

TEST(Http, ExhaustedRetriesRaise) {
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  policy::HttpPolicy http(stub.config(), no_sleep);
  EXPECT_THROW(http.complete({"s", "u"}), policy::PolicyUnavailable);
  EXPECT_EQ(stub.hits, 3);
}

TEST(Http, MalformedBody) {
  StubServer stub([](const httplib::Request&, httplib::Response& res) { res.set_content("{\"x\": 1}", "application/json"); });
  policy::HttpPolicy http(stub.config(), no_sleep);
  EXPECT_THROW(http.complete({"s", "u"}), policy::MalformedResponse);
  EXPECT_THROW(policy::HttpPolicy::parse_response("not json"), policy::MalformedResponse);
}

TEST(Http, CredentialFromEnvironment) {
  std::string seen;
  StubServer stub([&](const httplib::Request& req, httplib::Response& res) {
    seen = req.get_header_value("Authorization");
    res.set_content(reply("ok"), "application/json");
  });
  auto cfg = stub.config();
  cfg.api_key_env = "MOLRL_TEST_KEY";
  ::setenv("MOLRL_TEST_KEY", "secret", 1);
  policy::HttpPolicy(cfg, no_sleep).complete({"s", "u"});
  ::unsetenv("MOLRL_TEST_KEY");
  EXPECT_EQ(seen, "Bearer secret");
}

TEST(Http, UnreachableHost) {
  policy::EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:1";
  cfg.model = "m";
  cfg.timeout_seconds = 1;
  cfg.max_attempts = 2;
  policy::HttpPolicy http(cfg, no_sleep);
  EXPECT_THROW(http.complete({"s", "u"}), policy::PolicyUnavailable);
}

TEST(Http, RequestBodyShape) {
  policy::EndpointConfig cfg;
  cfg.model = "m";
  const auto body = nlohmann::json::parse(policy::HttpPolicy::request_body(cfg, {"sys", "usr", 0.5, 64, 9}));
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "usr");
  EXPECT_EQ(body["temperature"], 0.5);
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["seed"], 9);
}

TEST(EndpointConfig, RejectsCredentialsInFile) {
  EXPECT_THROW(policy::EndpointConfig::from_file(
                   KeyValueFile::parse("base_url = http://x\nmodel = m\napi_key = abc")),
               ConfigError);
  EXPECT_THROW(policy::EndpointConfig::from_file(KeyValueFile::parse("base_url = http://x\nmodel = m\ntoken = abc")),
               ConfigError);
  EXPECT_THROW(policy::EndpointConfig::from_file(KeyValueFile::parse("base_url = ftp://x\nmodel = m")), ConfigError);
  const auto cfg = policy::EndpointConfig::from_file(
      KeyValueFile::parse("base_url = https://host/v1\nmodel = m\napi_key_env = OTHER_KEY"));
  EXPECT_EQ(cfg.api_key_env, "OTHER_KEY");
}

TEST(EndpointConfig, ShippedExampleLoads) {
  const auto cfg = policy::EndpointConfig::from_file(
      KeyValueFile::load(std::filesystem::path(MOLRL_CONFIG_DIR) / "endpoint.cfg.example"));
  EXPECT_FALSE(cfg.model.empty());
}

}  // namespace
