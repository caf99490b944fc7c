#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "secgame/cli.hpp"
#include "secgame/error.hpp"

namespace secgame::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw Error(ErrorKind::InvalidInput, source_ + ":" + std::to_string(line) + ": " + what);
  }

  double number(std::size_t line, const std::string& text) const {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const double num = number(line, text.substr(0, slash));
      const double den = number(line, text.substr(slash + 1));
      if (den == 0.0) fail(line, "zero denominator in '" + text + "'");
      return num / den;
    }
    if (text.empty()) fail(line, "expected a number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(line, "'" + text + "' is not a finite number");
    }
    return v;
  }

  std::uint64_t integer(std::size_t line, const std::string& text) const {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      fail(line, "'" + text + "' is not a nonnegative integer");
    }
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) fail(line, "'" + text + "' is out of range");
    return v;
  }

 private:
  std::string source_;
};

struct Entry {
  std::size_t line;
  std::string key;
  std::string value;
};

}  // namespace

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  const Parser p(source);
  const std::set<std::string> known = {"facilities", "costs", "network", "learning"};
  std::map<std::string, std::vector<Entry>> sections;
  std::map<std::string, std::size_t> section_line;
  std::string current;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') p.fail(line, "unterminated section header");
      current = trim(text.substr(1, text.size() - 2));
      if (!known.count(current)) p.fail(line, "unknown section [" + current + "]");
      if (section_line.count(current)) p.fail(line, "section [" + current + "] repeated");
      section_line[current] = line;
      sections[current];
      continue;
    }
    if (current.empty()) p.fail(line, "entry outside any section");
    const auto eq = text.find('=');
    if (eq == std::string::npos) p.fail(line, "expected 'key = value'");
    Entry e{line, trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
    if (e.key.empty()) p.fail(line, "missing key");
    if (e.value.empty()) p.fail(line, "missing value for '" + e.key + "'");
    sections[current].push_back(std::move(e));
  }

  Scenario sc;

  if (sections.count("facilities")) {
    std::optional<double> baseline;
    std::vector<std::string> ids;
    std::vector<double> post;
    for (const Entry& e : sections["facilities"]) {
      if (e.key == "baseline") {
        if (baseline) p.fail(e.line, "baseline given twice");
        baseline = p.number(e.line, e.value);
      } else {
        if (e.key.find_first_of(" \t") != std::string::npos) p.fail(e.line, "facility ids cannot contain spaces");
        for (const auto& id : ids) {
          if (id == e.key) p.fail(e.line, "facility '" + e.key + "' listed twice");
        }
        ids.push_back(e.key);
        post.push_back(p.number(e.line, e.value));
      }
    }
    const std::size_t at = section_line["facilities"];
    if (!baseline) p.fail(at, "[facilities] needs 'baseline = C0'");
    if (ids.empty()) p.fail(at, "[facilities] lists no facility");
    try {
      sc.profile.emplace(std::move(ids), *baseline, std::move(post));
    } catch (const Error& err) {
      p.fail(at, err.detail());
    }
  }

  if (sections.count("costs")) {
    std::optional<double> attack;
    std::optional<double> defense;
    for (const Entry& e : sections["costs"]) {
      if (e.key == "attack") {
        attack = p.number(e.line, e.value);
      } else if (e.key == "defense") {
        defense = p.number(e.line, e.value);
      } else {
        p.fail(e.line, "unknown key '" + e.key + "' in [costs]");
      }
    }
    const std::size_t at = section_line["costs"];
    if (!attack || !defense) p.fail(at, "[costs] needs both 'attack' and 'defense'");
    if (!(*attack > 0.0)) p.fail(at, "attack cost must be positive");
    if (!(*defense > 0.0)) p.fail(at, "defense cost must be positive");
    sc.params.emplace(*attack, *defense);
  }

  if (sections.count("network")) {
    std::optional<double> demand;
    std::vector<routing::Edge> edges;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> route_words;
    std::vector<std::string> route_ids;
    for (const Entry& e : sections["network"]) {
      const auto key = words(e.key);
      if (key.size() == 1 && key[0] == "demand") {
        demand = p.number(e.line, e.value);
      } else if (key.size() == 2 && key[0] == "edge") {
        const auto v = words(e.value);
        if (v.size() != 4) {
          p.fail(e.line, "edge needs 'slope intercept compromised_slope compromised_intercept'");
        }
        edges.push_back({key[1],
                         {p.number(e.line, v[0]), p.number(e.line, v[1])},
                         {p.number(e.line, v[2]), p.number(e.line, v[3])}});
      } else if (key.size() == 2 && key[0] == "route") {
        route_ids.push_back(key[1]);
        route_words.emplace_back(e.line, words(e.value));
      } else {
        p.fail(e.line, "unknown key '" + e.key + "' in [network]");
      }
    }
    const std::size_t at = section_line["network"];
    if (!demand) p.fail(at, "[network] needs 'demand'");
    std::vector<routing::Route> routes;
    for (std::size_t r = 0; r < route_ids.size(); ++r) {
      routing::Route route{route_ids[r], {}};
      for (const auto& w : route_words[r].second) {
        std::size_t idx = edges.size();
        for (std::size_t k = 0; k < edges.size(); ++k) {
          if (edges[k].id == w) idx = k;
        }
        if (idx == edges.size()) p.fail(route_words[r].first, "route uses unknown edge '" + w + "'");
        route.edges.push_back(idx);
      }
      routes.push_back(std::move(route));
    }
    try {
      sc.network.emplace(std::move(edges), std::move(routes), *demand);
    } catch (const Error& err) {
      p.fail(at, err.detail());
    }
  }

  if (sections.count("learning")) {
    const std::size_t at = section_line["learning"];
    if (!sc.network) p.fail(at, "[learning] needs a [network] section");
    LearningSection ls;
    const std::size_t n = sc.network->edges().size();
    std::vector<double> prior(n + 1, 0.0);
    bool any_prior = false;
    bool have_noise = false;
    for (const Entry& e : sections["learning"]) {
      const auto key = words(e.key);
      if (key.size() == 1 && key[0] == "noise") {
        ls.noise = p.number(e.line, e.value);
        if (!(ls.noise > 0.0)) p.fail(e.line, "noise half-width must be positive");
        have_noise = true;
      } else if (key.size() == 1 && key[0] == "horizon") {
        ls.horizon = p.integer(e.line, e.value);
        if (ls.horizon < 1) p.fail(e.line, "horizon must be at least 1");
      } else if (key.size() == 1 && key[0] == "seed") {
        ls.seed = p.integer(e.line, e.value);
      } else if (key.size() == 1 && key[0] == "state") {
        if (e.value != "empty" && e.value != "ne" && e.value != "spe" && !sc.network->find_edge(e.value)) {
          p.fail(e.line, "state must be 'empty', 'ne', 'spe' or an edge id");
        }
        ls.state = e.value;
      } else if (key.size() == 2 && key[0] == "prior") {
        std::size_t s = n;
        if (key[1] != "empty") {
          const auto idx = sc.network->find_edge(key[1]);
          if (!idx) p.fail(e.line, "prior names unknown state '" + key[1] + "'");
          s = *idx;
        }
        prior[s] = p.number(e.line, e.value);
        any_prior = true;
      } else {
        p.fail(e.line, "unknown key '" + e.key + "' in [learning]");
      }
    }
    if (!have_noise) p.fail(at, "[learning] needs 'noise'");
    if (any_prior) {
      try {
        learning::Belief check(prior);
      } catch (const Error& err) {
        p.fail(at, "prior: " + err.detail());
      }
      ls.prior = prior;
    }
    sc.learning = ls;
  }

  if (!sc.profile && sc.network) sc.profile = routing::profile_from_network(*sc.network);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open scenario '" + path + "'");
  return parse_scenario(in, path);
}

std::pair<analysis::AxisRange, analysis::AxisRange> parse_grid(const std::string& text) {
  const Parser p("--grid");
  const auto comma = text.find(',');
  if (comma == std::string::npos) p.fail(1, "expected 'ca0:ca1:n,cd0:cd1:m'");
  auto axis = [&](const std::string& part) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = part.find(':', start)) != std::string::npos; start = pos + 1) {
      f.push_back(part.substr(start, pos - start));
    }
    f.push_back(part.substr(start));
    if (f.size() != 3) p.fail(1, "each axis is 'lo:hi:steps'");
    analysis::AxisRange r{p.number(1, trim(f[0])), p.number(1, trim(f[1])),
                          static_cast<std::size_t>(p.integer(1, trim(f[2])))};
    if (!(r.lo >= 0.0 && r.hi > r.lo) || r.steps < 2) p.fail(1, "axis needs 0 <= lo < hi and steps >= 2");
    return r;
  };
  return {axis(text.substr(0, comma)), axis(text.substr(comma + 1))};
}

}  // namespace secgame::cli
