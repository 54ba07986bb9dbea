#include "hyll/service.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace hyll {

namespace {

Reply fail(int status, ErrorKind kind, const std::string& msg) {
  return {status, {{"error", {{"kind", to_string(kind)}, {"message", msg}}}}};
}

int status_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Session: return 404;
    case ErrorKind::NotFound: return 422;
    case ErrorKind::OpenGoals:
    case ErrorKind::UnresolvedMetavariable: return 409;
    case ErrorKind::Io: return 500;
    default: return 400;
  }
}

Reply fail(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  return {err ? status_for(err->kind()) : 500, error_json(e)};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

bool safe_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Leading `--` comment lines, joined.
std::string summary(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line) && line.rfind("--", 0) == 0) {
    std::string body = line.substr(2);
    body.erase(0, body.find_first_not_of(' '));
    out += (out.empty() ? "" : " ") + body;
  }
  return out;
}

// A bare sequent becomes a one-goal script.
std::string as_script(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line.compare(b, 2, "--") == 0) continue;
    std::string word;
    for (std::size_t i = b; i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'); ++i)
      word += line[i];
    for (const char* d : {"model", "let", "tactic", "goal", "prop"})
      if (word == d) return text;
    break;
  }
  return "goal: " + text;
}

Json session_json(const std::string& id, const Session& s) {
  Json j = state_json(s.state());
  j["session"] = id;
  j["history"] = s.tactics();
  return j;
}

}  // namespace

Json error_json(const std::exception& e) {
  Json err = {{"message", e.what()}};
  if (const auto* se = dynamic_cast<const ScriptError*>(&e)) err["line"] = se->line();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["line"] = pe->line();
    err["column"] = pe->column();
    err["expected"] = pe->expected();
  }
  const auto* he = dynamic_cast<const Error*>(&e);
  err["kind"] = he ? to_string(he->kind()) : "Internal";
  return {{"error", err}};
}

Json goal_json(const GoalView& g) {
  Json gamma = Json::array(), delta = Json::array();
  for (const auto& j : g.sequent.gamma) gamma.push_back(to_string(j));
  for (const auto& j : g.sequent.delta) delta.push_back(to_string(j));
  Json out = {{"id", g.id}, {"sequent", to_string(g.sequent)}, {"gamma", gamma}, {"delta", delta},
              {"goal", to_string(g.sequent.goal)}, {"case", nullptr}};
  if (g.case_index) out["case"] = {{"index", *g.case_index + 1}, {"label", g.case_label}};
  return out;
}

Json state_json(const ProofState& ps) {
  Json goals = Json::array();
  for (const auto& g : ps.goals()) goals.push_back(goal_json(g));
  Json w = Json::object();
  for (const auto& [name, value] : ps.witnesses()) w[name] = value ? Json(*value) : Json(nullptr);
  return {{"complete", ps.complete()}, {"goals", goals}, {"witnesses", w}};
}

Json verdict_json(const CertificateVerdict& v) {
  Json out = {{"ok", v.ok}};
  if (!v.ok) {
    out["obligation"] = v.obligation;
    out["path"] = v.error.path;
    out["reason"] = to_string(v.error.reason);
    out["detail"] = v.error.detail;
  }
  return out;
}

Json witnesses_json(const Certificate& c) {
  Json w = Json::object();
  for (const auto& [k, v] : c.witnesses) w[k] = v;
  return w;
}

SessionService::SessionService(ServiceOptions opt) : opt_(std::move(opt)), rng_(std::random_device{}()) {}

std::size_t SessionService::session_count() {
  std::lock_guard<std::mutex> g(lock_);
  return sessions_.size();
}

void SessionService::expire() {
  auto now = opt_.now();
  std::lock_guard<std::mutex> g(lock_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock<std::mutex> busy(it->second->lock, std::try_to_lock);
    if (busy && now - it->second->touched > opt_.idle_timeout)
      it = sessions_.erase(it);
    else
      ++it;
  }
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) {
  std::lock_guard<std::mutex> g(lock_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Reply SessionService::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    expire();
    Json req = Json::object();
    if (!body.empty()) {
      req = Json::parse(body, nullptr, false);
      if (req.is_discarded() || !req.is_object()) return fail(400, ErrorKind::Parse, "request body must be a JSON object");
    }
    std::vector<std::string> parts = split_path(path);
    if (parts.size() == 1 && parts[0] == "examples") {
      if (method != "GET") return fail(405, ErrorKind::Session, "use GET");
      return examples();
    }
    if (parts.size() == 2 && parts[0] == "examples") {
      if (method != "GET") return fail(405, ErrorKind::Session, "use GET");
      return example(parts[1]);
    }
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1) {
        if (method != "POST") return fail(405, ErrorKind::Session, "use POST");
        return create(req);
      }
      if (parts.size() <= 3) return on_session(parts[1], parts.size() == 3 ? parts[2] : "", method, req);
    }
    return fail(404, ErrorKind::NotFound, "no route for " + method + " " + path);
  } catch (const std::exception& e) {
    return fail(e);
  } catch (...) {
    return {500, {{"error", {{"kind", "Internal"}, {"message", "unknown failure"}}}}};
  }
}

Reply SessionService::create(const Json& req) {
  ProofScript s;
  if (req.contains("example")) {
    if (!req["example"].is_string() || !safe_name(req["example"].get<std::string>()))
      return fail(400, ErrorKind::Parse, "example must be a plain name");
    std::string name = req["example"].get<std::string>();
    auto p = std::filesystem::path(opt_.examples_dir) / (name + ".hp");
    if (!std::filesystem::exists(p)) return fail(404, ErrorKind::NotFound, "no example " + name);
    // Goals only; the client replays the tactics itself.
    s = parse_script(read_text(p), opt_.examples_dir);
    s.steps.clear();
  } else {
    if (!req.contains("goal") || !req["goal"].is_string())
      return fail(400, ErrorKind::Parse, "missing string field 'goal'");
    s = parse_script(as_script(req["goal"].get<std::string>()), opt_.examples_dir);
  }
  std::vector<ScriptStep> steps = std::move(s.steps);
  s.steps.clear();
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(std::move(s));
  for (const auto& st : steps) {
    try {
      entry->session->apply(st.text);
    } catch (const ScriptError& e) {
      throw ScriptError(e.kind(), st.line, e.detail());
    } catch (const ParseError& e) {
      throw ParseError(st.line, e.column(), e.expected(), e.detail());
    }
  }
  entry->touched = opt_.now();
  std::string id;
  {
    std::lock_guard<std::mutex> g(lock_);
    std::ostringstream os;
    os << std::hex << rng_() << "-" << ++counter_;
    id = os.str();
    sessions_[id] = entry;
  }
  return {201, session_json(id, *entry->session)};
}

Reply SessionService::on_session(const std::string& id, const std::string& action, const std::string& method,
                                 const Json& req) {
  auto entry = find(id);
  if (!entry) return fail(404, ErrorKind::Session, "unknown or expired session " + id);
  std::lock_guard<std::mutex> g(entry->lock);
  entry->touched = opt_.now();
  Session& s = *entry->session;
  auto want = [&](const char* m) { return method == m; };

  if (action.empty()) {
    if (want("GET")) return {200, session_json(id, s)};
    if (want("DELETE")) {
      std::lock_guard<std::mutex> gl(lock_);
      sessions_.erase(id);
      return {200, {{"session", id}, {"deleted", true}}};
    }
    return fail(405, ErrorKind::Session, "use GET or DELETE");
  }
  if (action == "apply") {
    if (!want("POST")) return fail(405, ErrorKind::Session, "use POST");
    if (!req.contains("tactic") || !req["tactic"].is_string())
      return fail(400, ErrorKind::Parse, "missing string field 'tactic'");
    std::optional<int> goal;
    if (req.contains("goal") && !req["goal"].is_null()) {
      if (!req["goal"].is_number_integer()) return fail(400, ErrorKind::Parse, "'goal' must be an integer");
      goal = req["goal"].get<int>();
      const auto& open = s.state().open_goals();
      if (std::find(open.begin(), open.end(), *goal) == open.end())
        return fail(400, ErrorKind::RuleNotApplicable, "goal " + std::to_string(*goal) + " is not open");
    }
    s.apply(req["tactic"].get<std::string>(), goal);
    return {200, session_json(id, s)};
  }
  if (action == "undo") {
    if (!want("POST")) return fail(405, ErrorKind::Session, "use POST");
    if (!s.undo()) return fail(400, ErrorKind::Session, "nothing to undo");
    return {200, session_json(id, s)};
  }
  if (action == "extract") {
    if (!want("POST")) return fail(405, ErrorKind::Session, "use POST");
    Certificate c = extract_certificate(s.state());
    return {200,
            {{"session", id},
             {"certificate", write_certificate(c)},
             {"obligations", c.obligations.size()},
             {"witnesses", witnesses_json(c)},
             {"check", verdict_json(check_certificate(c))}}};
  }
  if (action == "transcript") {
    if (!want("GET")) return fail(405, ErrorKind::Session, "use GET");
    return {200, {{"session", id}, {"transcript", s.transcript()}, {"replayable", s.replayable()}}};
  }
  return fail(404, ErrorKind::NotFound, "unknown action " + action);
}

Reply SessionService::examples() {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(opt_.examples_dir, ec))
    if (e.path().extension() == ".hp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  Json list = Json::array();
  for (const auto& f : files) list.push_back({{"name", f.stem().string()}, {"summary", summary(read_text(f))}});
  return {200, {{"examples", list}}};
}

Reply SessionService::example(const std::string& name) {
  if (!safe_name(name)) return fail(400, ErrorKind::Parse, "example must be a plain name");
  auto p = std::filesystem::path(opt_.examples_dir) / (name + ".hp");
  if (!std::filesystem::exists(p)) return fail(404, ErrorKind::NotFound, "no example " + name);
  std::string text = read_text(p);
  ProofScript s = parse_script(text, opt_.examples_dir);
  Json goals = Json::array();
  for (std::size_t i = 0; i < s.goals.size(); ++i)
    goals.push_back({{"label", s.goal_labels[i]}, {"sequent", to_string(s.goals[i])}});
  Json tactics = Json::array();
  for (const auto& st : s.steps) tactics.push_back(st.text);
  return {200, {{"name", name}, {"summary", summary(text)}, {"text", text}, {"goals", goals}, {"tactics", tactics}}};
}

}  // namespace hyll
