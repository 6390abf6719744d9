// Acceptance suite: one PASS/FAIL line per criterion. Extra arguments are
// the unit test executables, re-run without network access.
#include <arpa/inet.h>
#include <fcntl.h>
#include <net/if.h>
#include <netinet/in.h>
#include <sched.h>
#include <sys/ioctl.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "planted.hpp"
#include "thematic/app/commands.hpp"
#include "thematic/audit/audit.hpp"
#include "thematic/cluster/cluster.hpp"
#include "thematic/deductive/deductive.hpp"
#include "thematic/inductive/inductive.hpp"
#include "thematic/prompts/prompts.hpp"
#include "thematic/providers/mock.hpp"
#include "thematic/util/io.hpp"
#include "thematic/util/text.hpp"

using namespace thematic;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) {
    s.replace(p, from.size(), to);
  }
  return s;
}

// ---------------------------------------------------------------------------

void clustering_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t compared = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng() % 11;
    const std::size_t dim = inst % 2 == 0 ? 2 : 8;
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    std::vector<providers::EmbeddingVector> vecs;
    for (auto& p : pts) {
      for (auto& x : p) x = g(rng);
      // Keep away from the origin so every vector is a valid embedding.
      p[0] += (p[0] >= 0 ? 0.1 : -0.1);
      vecs.emplace_back(p);
    }
    for (auto linkage : {cluster::Linkage::kAverage, cluster::Linkage::kComplete, cluster::Linkage::kSingle}) {
      for (std::size_t k = 1; k <= n; ++k) {
        auto [a, trace] = cluster::agglomerate(vecs, cluster::ClusterParams{linkage, cluster::CountCut{k}});
        expect(a.labels == testing::oracle_partition_k(pts, linkage, k),
               "instance " + std::to_string(inst) + " k=" + std::to_string(k) + " linkage " +
                   cluster::to_string(linkage));
        ++compared;
      }
      for (double t : {0.05, 0.2, 0.5, 0.9, 1.3}) {
        auto [a, trace] = cluster::agglomerate(vecs, cluster::ClusterParams{linkage, cluster::ThresholdCut{t}});
        expect(a.labels == testing::oracle_partition_threshold(pts, linkage, t),
               "instance " + std::to_string(inst) + " t=" + std::to_string(t));
        ++compared;
      }
    }
  }
  const double secs = seconds_since(t0);
  expect(secs < 10.0, "took " + std::to_string(secs) + " s");
  std::cout << "    " << compared << " partitions compared in " << secs << " s\n";
}

void cosine_kernel() {
  const std::vector<double> e1{1, 0, 0}, e2{0, 1, 0};
  expect(cluster::cosine_distance(e1, e2) == 1.0, "orthogonal distance is not exactly 1");
  const std::vector<double> u{1, 2, 2}, v{2, 1, 2};
  const double d = cluster::cosine_distance(u, v);
  expect(std::fabs(d - (1.0 - 8.0 / 9.0)) < 1e-12, "(1,2,2)/(2,1,2) gave " + std::to_string(d));
  expect(std::fabs(d - testing::oracle_cosine(u, v)) < 1e-12, "kernel disagrees with the reference");
}

void prompt_exactness() {
  const std::string sentence = "I want to protect forests.";
  expect(inductive::render_summary_prompt({sentence}) == testing::golden("summary.txt") + "\n- " + sentence,
         "summary prompt");
  auto onet = deductive::LabelSet::load(testing::data_path("labelsets/onet_15_17.json"));
  auto factors = deductive::LabelSet::load(testing::data_path("labelsets/career_satisfaction_16.json"));
  const std::string statement = "I may need to test code for vulnerabilities.";
  std::string careers = replace_all(testing::golden("careers.txt"), "{labels_string}", prompts::labels_string(onet.labels()));
  expect(deductive::render_careers_prompt(onet, statement) == replace_all(careers, "{statement}", statement),
         "careers prompt");
  std::string factors_text =
      replace_all(testing::golden("factors.txt"), "{labels_string}", prompts::labels_string(factors.labels()));
  expect(deductive::render_factors_prompt(factors, statement) == replace_all(factors_text, "{comment}", statement),
         "factors prompt");
  std::string acc = replace_all(testing::golden("accuracy.txt"), "{label}", "Making money");
  expect(audit::render_accuracy_prompt("Making money", statement) == replace_all(acc, "{comment}", statement),
         "accuracy prompt");
}

void parser_suite() {
  expect(inductive::strip_commonality("Commonality: X") == "X", "commonality marker");
  auto onet = deductive::LabelSet::load(testing::data_path("labelsets/onet_15_17.json"));
  auto factors = deductive::LabelSet::load(testing::data_path("labelsets/career_satisfaction_16.json"));
  auto f = deductive::parse_label_response("List: making money", factors);
  expect(f.labels == std::vector<std::string>{"Making money"} && f.unmatched.empty(), "factors example");
  auto c = deductive::parse_label_response(
      "Information Security Analysts, Software Quality Assurance Analysts and Testers", onet);
  expect(c.labels.size() == 2 && c.labels[0] == "Information Security Analysts" &&
             c.labels[1] == "Software Quality Assurance Analysts and Testers" && c.unmatched.empty(),
         "careers example");
  for (const char* na : {"N/A", "n/a", "N/A.", "List: N/A", " n/a "}) {
    auto p = deductive::parse_label_response(na, factors);
    expect(p.labels.empty() && p.unmatched.empty(), std::string("N/A variant '") + na + "'");
  }
  auto u = deductive::parse_label_response("List: Making money, Astronaut glory", factors);
  expect(u.labels == std::vector<std::string>{"Making money"} &&
             u.unmatched == std::vector<std::string>{"Astronaut glory"},
         "unknown label");
}

std::vector<audit::AccuracyVerdict> verdicts_of(const std::vector<testing::AuditRow>& rows,
                                                std::vector<audit::HumanReview>* reviews) {
  std::vector<audit::AccuracyVerdict> out;
  for (const auto& r : rows) {
    const std::string id = corpus::make_sent_id(r.doc_id, 0);
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      out.push_back({id, r.labels[i], r.scores[i], std::to_string(r.scores[i]), r.scores[i] < 4});
      if (reviews) reviews->push_back({id, r.labels[i], audit::verdict_from_string(r.verdicts[i])});
    }
  }
  return out;
}

void agreement_arithmetic() {
  struct Case {
    const char* file;
    const char* set;
    std::size_t a, d, q, labels;
    double rate;
  };
  for (const auto& tc : {Case{"onet_audit.jsonl", "onet_15_17.json", 219, 2, 14, 235, 0.932},
                         Case{"factors_audit.jsonl", "career_satisfaction_16.json", 129, 7, 14, 150, 0.860}}) {
    auto rows = testing::load_audit_rows(tc.file);
    expect(rows.size() == 100, std::string(tc.file) + " does not hold 100 sentences");
    // Bookkeeping: label the 100 sentences through the pipeline and count.
    auto set = deductive::LabelSet::load(testing::data_path(std::string("labelsets/") + tc.set));
    auto backend = std::make_shared<providers::MockGenerativeBackend>(testing::audit_fixture_map(rows, set), true, 0);
    providers::Generator gen(backend, testing::mock_config());
    std::vector<corpus::SentenceRecord> sents;
    for (const auto& r : rows) sents.push_back({corpus::make_sent_id(r.doc_id, 0), r.doc_id, 0, r.text});
    auto apps = deductive::apply_label_set(sents, set, gen);
    std::size_t applied = 0;
    for (const auto& a : apps) applied += a.labels.size();
    expect(applied == tc.labels, std::string(tc.file) + ": " + std::to_string(applied) + " labels applied");

    std::vector<audit::HumanReview> reviews;
    auto verdicts = verdicts_of(rows, &reviews);
    auto rep = audit::agreement_report(verdicts, reviews);
    expect(rep.agreement == tc.a && rep.disagreement == tc.d && rep.questionable == tc.q,
           std::string(tc.file) + ": verdict counts");
    const double pct = 100.0 * rep.agreement_rate;
    expect(std::fabs(pct - 100.0 * tc.rate) <= 0.1, std::string(tc.file) + ": rate " + std::to_string(pct));
    std::cout << "    " << tc.file << ": " << applied << " labels, agreement " << pct << "%\n";
  }
}

void flagging() {
  std::vector<audit::AccuracyVerdict> v;
  for (int s = 1; s <= 10; ++s) v.push_back({"s#" + std::to_string(s), "L", s, std::to_string(s), false});
  std::set<int> flagged;
  for (const auto& f : audit::flag_verdicts(v, 4)) flagged.insert(*f.score);
  expect(flagged == std::set<int>{1, 2, 3}, "flagged set at threshold 4");

  auto cfg = testing::mock_config();
  cfg.mock.strict = true;
  cfg.mock.fixtures_path = testing::data_path("fixtures/worked_fixtures.json");
  providers::Generator gen(providers::make_generative_backend(cfg), cfg);
  auto ex = io::read_json(testing::data_path("fixtures/worked_examples.json"))["accuracy"][0];
  auto nasa = audit::rate_label("nasa#0", ex["label"].get<std::string>(), ex["comment"].get<std::string>(), gen);
  expect(nasa.score == 8, "NASA comment score");
  expect(!nasa.flagged, "NASA comment flagged");
}

std::string run_planted(const testing::TempDir& tmp, const std::string& name, const std::string& in_dir) {
  const std::string run = tmp / name;
  std::ostringstream out, err;
  auto cli = [&](std::vector<std::string> args) {
    std::vector<std::string> a{"--run-dir", run, "--provider", "mock", "--seed", "11"};
    a.insert(a.end(), args.begin(), args.end());
    int code = app::run_cli(a, out, err);
    expect(code == 0, "command failed: " + err.str());
  };
  cli({"ingest", in_dir});
  cli({"induct", "--k1", "5", "--k2", "5"});
  return run + "/codebook.json";
}

void planted_end_to_end() {
  const auto t0 = Clock::now();
  testing::TempDir tmp;
  auto pc = testing::make_planted_corpus(5, 40);
  expect(pc.topic_of.size() == 200, "planted corpus size");
  testing::write_documents(pc, tmp / "in");
  const std::string a = run_planted(tmp, "run_a", tmp / "in");
  const std::string b = run_planted(tmp, "run_b", tmp / "in");
  const std::string bytes = text::read_file(a);
  expect(bytes == text::read_file(b), "repeated run differs");

  auto book = inductive::codebook_from_json(json::parse(bytes));
  expect(book.themes.size() == 5, "theme count " + std::to_string(book.themes.size()));
  std::map<std::string, std::size_t> theme_of;
  for (std::size_t t = 0; t < book.themes.size(); ++t)
    for (const auto& s : book.themes[t].summaries)
      for (const auto& e : s.exemplars) theme_of[e.sent_id] = t;
  expect(theme_of.size() == 200, "codebook covers " + std::to_string(theme_of.size()) + " sentences");
  // Partitions are equal when the theme/topic correspondence is a bijection.
  std::map<std::size_t, std::size_t> topic_to_theme, theme_to_topic;
  for (const auto& [id, topic] : pc.topic_of) {
    auto it = theme_of.find(id);
    expect(it != theme_of.end(), id + " missing from the codebook");
    auto [x, fresh1] = topic_to_theme.emplace(topic, it->second);
    auto [y, fresh2] = theme_to_topic.emplace(it->second, topic);
    expect(x->second == it->second && y->second == topic, id + " is in the wrong theme");
  }
  const double secs = seconds_since(t0);
  expect(secs < 30.0, "took " + std::to_string(secs) + " s");
  std::cout << "    200 sentences, 5 themes, two runs in " << secs << " s\n";
}

enum class Isolation { kNone, kNetNs, kUserNetNs };

// Child side: enter a fresh network namespace that only has loopback.
bool isolate_network(Isolation mode, const std::string& uid_map, const std::string& gid_map) {
  if (mode == Isolation::kNone) return true;
  if (mode == Isolation::kNetNs) {
    if (::unshare(CLONE_NEWNET) != 0) return false;
  } else {
    if (::unshare(CLONE_NEWUSER | CLONE_NEWNET) != 0) return false;
    auto put = [](const char* path, const std::string& v) {
      int fd = ::open(path, O_WRONLY);
      if (fd < 0) return false;
      bool ok = ::write(fd, v.data(), v.size()) == static_cast<ssize_t>(v.size());
      ::close(fd);
      return ok;
    };
    put("/proc/self/setgroups", "deny");
    if (!put("/proc/self/uid_map", uid_map) || !put("/proc/self/gid_map", gid_map)) return false;
  }
  int sock = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (sock < 0) return false;
  ifreq ifr{};
  std::strncpy(ifr.ifr_name, "lo", IFNAMSIZ - 1);
  bool ok = ::ioctl(sock, SIOCGIFFLAGS, &ifr) == 0;
  ifr.ifr_flags |= IFF_UP;
  ok = ok && ::ioctl(sock, SIOCSIFFLAGS, &ifr) == 0;
  ::close(sock);
  return ok;
}

// True when nothing outside loopback is routable.
bool no_route_out() {
  int sock = ::socket(AF_INET, SOCK_STREAM, 0);
  if (sock < 0) return false;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(80);
  ::inet_pton(AF_INET, "192.0.2.1", &addr.sin_addr);
  int rc = ::connect(sock, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  int err = errno;
  ::close(sock);
  return rc != 0 && err == ENETUNREACH;
}

// Runs `bin` (or the isolation probe when bin is empty) in a child process.
int run_child(Isolation mode, const std::string& bin, const std::string& log) {
  const std::string uid_map = "0 " + std::to_string(::getuid()) + " 1";
  const std::string gid_map = "0 " + std::to_string(::getgid()) + " 1";
  pid_t pid = ::fork();
  if (pid < 0) return -1;
  if (pid == 0) {
    if (!log.empty()) {
      int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (fd >= 0) {
        ::dup2(fd, 1);
        ::dup2(fd, 2);
      }
    }
    if (!isolate_network(mode, uid_map, gid_map)) ::_exit(125);
    if (bin.empty()) ::_exit(mode == Isolation::kNone || no_route_out() ? 0 : 1);
    char* argv[] = {const_cast<char*>(bin.c_str()), nullptr};
    ::execv(bin.c_str(), argv);
    ::_exit(127);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Clock::time_point g_start;

void offline_closure(const std::vector<std::string>& binaries) {
  expect(!binaries.empty(), "no test executables given");
  Isolation mode = Isolation::kNone;
  if (run_child(Isolation::kNetNs, "", "") == 0) {
    mode = Isolation::kNetNs;
  } else if (run_child(Isolation::kUserNetNs, "", "") == 0) {
    mode = Isolation::kUserNetNs;
  }
  std::cout << "    " << (mode == Isolation::kNone ? "network namespaces unavailable; running directly"
                                                 : "network namespace with loopback only")
            << "\n";
  testing::TempDir logs;
  for (const auto& bin : binaries) {
    const std::string name = bin.substr(bin.find_last_of('/') + 1);
    const std::string log = logs / (name + ".log");
    const auto t0 = Clock::now();
    const bool ok = run_child(mode, bin, log) == 0;
    std::printf("    %-40s %s %.2f s\n", name.c_str(), ok ? "ok" : "FAILED", seconds_since(t0));
    std::fflush(stdout);
    if (!ok) std::cout << text::read_file(log);
    expect(ok, bin + " failed offline");
  }
  const double total = seconds_since(g_start);
  expect(total < 60.0, "suite took " + std::to_string(total) + " s");
  std::cout << "    whole suite " << total << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  g_start = Clock::now();
  std::vector<std::string> binaries(argv + 1, argv + argc);
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"clustering oracle equivalence", clustering_oracle},
      {"cosine kernel", cosine_kernel},
      {"prompt bit-exactness", prompt_exactness},
      {"parser suite", parser_suite},
      {"agreement arithmetic and label bookkeeping", agreement_arithmetic},
      {"flagging", flagging},
      {"planted-topic end to end", planted_end_to_end},
      {"offline closure", [&] { offline_closure(binaries); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    std::string detail;
    bool ok = true;
    try {
      fn();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << std::endl;
    failed += ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
