#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hyll/service.hpp"

#ifndef HYLL_DATA_DIR
#define HYLL_DATA_DIR "data"
#endif

namespace hyll {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

std::string path_text(const std::vector<int>& path) {
  if (path.empty()) return "root";
  std::string s;
  for (int p : path) s += (s.empty() ? "" : ".") + std::to_string(p);
  return s;
}

std::string witness_text(const Certificate& c) {
  std::string s;
  for (const auto& [k, v] : c.witnesses) s += (s.empty() ? "" : ", ") + k + " = " + v;
  return s;
}

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool json = false;

  int error(const std::exception& e) {
    if (json) {
      err << error_json(e).dump() << "\n";
    } else {
      const auto* he = dynamic_cast<const Error*>(&e);
      err << "error[" << (he ? to_string(he->kind()) : "Internal") << "]: " << e.what() << "\n";
    }
    return 1;
  }
};

// Certificate to a file, or to stdout when no path is given.
int emit_certificate(Io& io, const Certificate& c, const std::string& out_path) {
  CertificateVerdict v = check_certificate(c);
  std::string text = write_certificate(c);
  if (!out_path.empty()) write_file(out_path, text);
  if (io.json) {
    Json j = {{"obligations", c.obligations.size()}, {"witnesses", witnesses_json(c)}, {"check", verdict_json(v)}};
    if (out_path.empty())
      j["certificate"] = text;
    else
      j["output"] = out_path;
    io.out << j.dump() << "\n";
  } else if (out_path.empty()) {
    io.out << text;
  } else {
    io.out << "proved " << c.obligations.size() << " obligation(s)";
    if (!c.witnesses.empty()) io.out << " with " << witness_text(c);
    io.out << "; certificate " << (v.ok ? "checks" : "FAILS") << "; written to " << out_path << "\n";
  }
  return v.ok ? 0 : 1;
}

int cmd_check_model(Io& io, const std::string& file) {
  BioModel m = parse_model(read_file(file));
  validate_model(m);
  if (io.json)
    io.out << Json{{"ok", true}, {"vars", m.vars}, {"rules", m.rules.size()}}.dump() << "\n";
  else
    io.out << "ok: " << m.vars.size() << " entities, " << m.rules.size() << " rules\n";
  return 0;
}

int cmd_compile(Io& io, const std::string& file, const std::string& out_path) {
  BioModel m = parse_model(read_file(file));
  std::string dump = dump_compiled(m, compile_system(m));
  if (!out_path.empty()) write_file(out_path, dump);
  if (io.json)
    io.out << Json{{"definitions", dump}}.dump() << "\n";
  else if (out_path.empty())
    io.out << dump;
  return 0;
}

int cmd_prove(Io& io, const std::string& file, const std::string& out_path) {
  return emit_certificate(io, run_script(load_script(file)), out_path);
}

int cmd_auto(Io& io, const std::string& file, int depth, std::size_t budget, const std::string& out_path) {
  ProofScript s = load_script(file);
  ProofState ps = run_steps(s);
  AutoOptions opt;
  opt.depth = depth;
  opt.budget = budget;
  while (!ps.complete()) ps = auto_search(ps, ps.open_goals().front(), opt);
  return emit_certificate(io, extract_certificate(ps), out_path);
}

int cmd_check_cert(Io& io, const std::string& file, bool allow_cut) {
  Certificate c = read_certificate(read_file(file));
  if (c.allow_cut && !allow_cut) {
    if (io.json)
      io.out << Json{{"ok", false}, {"reason", "CutDisallowed"}, {"detail", "certificate uses cut; pass --allow-cut"}}.dump()
             << "\n";
    else
      io.out << "rejected: certificate allows cut; pass --allow-cut to accept it\n";
    return 1;
  }
  CertificateVerdict v = check_certificate(c);
  if (io.json) {
    io.out << verdict_json(v).dump() << "\n";
  } else if (v.ok) {
    io.out << "ok: " << c.obligations.size() << " obligation(s) checked\n";
  } else {
    io.out << "rejected: obligation " << v.obligation << " ("
           << c.obligations[static_cast<std::size_t>(v.obligation)].label << "), path " << path_text(v.error.path)
           << ": " << to_string(v.error.reason) << ": " << v.error.detail << "\n";
  }
  return v.ok ? 0 : 1;
}

int cmd_oracle(Io& io, const std::string& file, const std::string& from, const std::string& query,
               const std::string& to, int bound) {
  BioModel m = parse_model(read_file(file));
  TransitionSystem ts = oracle_transitions(m);
  BoolState s = parse_state(from, ts.vars);
  if (query == "fixpoint") {
    bool fix = is_fixpoint(ts, s);
    std::vector<int> enabled;
    for (const auto& e : ts.edges[s]) enabled.push_back(e.rule);
    if (io.json)
      io.out << Json{{"state", state_to_string(s, ts.vars)}, {"fixpoint", fix}, {"enabled", enabled}}.dump() << "\n";
    else
      io.out << state_to_string(s, ts.vars) << (fix ? " is" : " is not") << " a fixpoint; enabled rules:"
             << [&] {
                  std::string r;
                  for (int x : enabled) r += " " + std::to_string(x);
                  return r.empty() ? std::string(" none") : r;
                }()
             << "\n";
    return 0;
  }
  if (query != "reach") throw Error(ErrorKind::Oracle, "unknown query '" + query + "'; use reach or fixpoint");
  auto pred = parse_state_predicate(to, ts.vars);
  auto path = oracle_reach(ts, s, pred, bound);
  if (io.json) {
    Json j = {{"from", state_to_string(s, ts.vars)}, {"reachable", path.has_value()}, {"bound", bound}};
    if (path) {
      j["path"] = *path;
      j["state"] = state_to_string(*follow_path(ts, s, *path), ts.vars);
    }
    io.out << j.dump() << "\n";
  } else if (path) {
    io.out << "reachable in " << path->size() << " step(s): rules";
    for (int r : *path) io.out << " " << r;
    io.out << " -> " << state_to_string(*follow_path(ts, s, *path), ts.vars) << "\n";
  } else {
    io.out << "not reachable within " << bound << " step(s)\n";
  }
  return path ? 0 : 1;
}

// Prints the model axioms at the front of gamma as `system`.
std::string display(const Sequent& seq, const ProofScript& script) {
  if (!script.compiled) return to_string(seq);
  const auto& sys = script.compiled->gamma;
  if (seq.gamma.size() < sys.size() || !std::equal(sys.begin(), sys.end(), seq.gamma.begin())) return to_string(seq);
  Sequent rest = seq;
  rest.gamma.erase(rest.gamma.begin(), rest.gamma.begin() + static_cast<std::ptrdiff_t>(sys.size()));
  std::string text = to_string(rest);
  return "system" + (rest.gamma.empty() ? text.substr(1) : ", " + text);
}

void show_goals(Io& io, const Session& s) {
  if (io.json) {
    Json j = state_json(s.state());
    j["history"] = s.tactics();
    io.out << j.dump() << "\n";
    return;
  }
  const ProofState& ps = s.state();
  if (ps.complete()) {
    io.out << "Proof complete.\n";
    return;
  }
  io.out << ps.open_goals().size() << " goal(s)\n";
  for (const auto& g : ps.goals()) {
    io.out << "  [" << g.id << "]";
    if (g.case_index) io.out << " (" << g.case_label << ")";
    io.out << " " << display(g.sequent, s.script()) << "\n";
  }
}

int cmd_repl(Io& io, const std::string& file) {
  ProofScript script = load_script(file);
  std::vector<ScriptStep> steps = std::move(script.steps);
  script.steps.clear();
  Session s(std::move(script));
  for (const auto& st : steps) {
    try {
      s.apply(st.text);
    } catch (const ScriptError& e) {
      throw ScriptError(e.kind(), st.line, e.detail());
    }
  }
  show_goals(io, s);
  std::string line;
  while (std::getline(io.in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line.compare(b, 2, "--") == 0) continue;
    line = line.substr(b);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
    std::string word = line.substr(0, line.find(' '));
    std::string arg = line.size() > word.size() ? line.substr(word.size() + 1) : "";
    try {
      if (word == "quit" || word == "exit") break;
      if (word == "goals") {
        show_goals(io, s);
      } else if (word == "undo") {
        if (!s.undo()) throw Error(ErrorKind::Session, "nothing to undo");
        show_goals(io, s);
      } else if (word == "save") {
        if (arg.empty()) throw Error(ErrorKind::Session, "save needs a path");
        Certificate c = extract_certificate(s.state());
        write_file(arg, write_certificate(c));
        if (io.json)
          io.out << Json{{"saved", arg}, {"check", verdict_json(check_certificate(c))}}.dump() << "\n";
        else
          io.out << "saved " << arg << "\n";
      } else if (word == "transcript") {
        if (arg.empty()) throw Error(ErrorKind::Session, "transcript needs a path");
        write_file(arg, s.transcript());
        if (!io.json) io.out << "wrote " << arg << "\n";
      } else {
        s.apply(line);
        show_goals(io, s);
      }
    } catch (const std::exception& e) {
      io.error(e);
    }
  }
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;

int cmd_serve(Io& io, const std::string& host, int port, const std::string& examples, int idle_minutes) {
  ServiceOptions opt;
  opt.examples_dir = examples;
  opt.idle_timeout = std::chrono::minutes(idle_minutes);
  SessionService svc(opt);
  HttpServer server(svc);
  int bound = server.start(host, port);
  if (bound < 0) throw Error(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port));
  if (io.json)
    io.out << Json{{"listening", host + ":" + std::to_string(bound)}}.dump() << std::endl;
  else
    io.out << "listening on http://" << host << ":" << bound << std::endl;
  g_stop = 0;
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop && server.running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid linear logic prover and biological model toolkit", "hyll"};
  app.require_subcommand(1);
  Io io{in, out, err};
  app.add_flag("--json", io.json, "Structured JSON output");
  app.fallthrough();

  std::string file, out_path, from, query = "reach", to, host = "127.0.0.1", examples = HYLL_DATA_DIR;
  int depth = 5, bound = 8, port = 8080, idle = 30;
  std::size_t budget = AutoOptions{}.budget;
  bool allow_cut = false;

  auto* check_model = app.add_subcommand("check-model", "Validate a model file");
  check_model->add_option("file", file)->required();
  auto* compile = app.add_subcommand("compile", "Print the compiled axioms of a model");
  compile->add_option("file", file)->required();
  compile->add_option("-o,--output", out_path, "Write to a file");
  auto* prove = app.add_subcommand("prove", "Run a proof script and write its certificate");
  prove->add_option("script", file)->required();
  prove->add_option("-o,--output", out_path, "Certificate path (default: stdout)");
  auto* autoc = app.add_subcommand("auto", "Prove every goal of a goal file by bounded search");
  autoc->add_option("goalfile", file)->required();
  autoc->add_option("--depth", depth, "Bound on non-invertible choices")->capture_default_str();
  autoc->add_option("--budget", budget, "Bound on search nodes")->capture_default_str();
  autoc->add_option("-o,--output", out_path, "Certificate path (default: stdout)");
  auto* check_cert = app.add_subcommand("check-cert", "Re-check a certificate with the kernel");
  check_cert->add_option("cert", file)->required();
  check_cert->add_flag("--allow-cut", allow_cut, "Accept derivations that use cut");
  auto* oracle = app.add_subcommand("oracle", "Query the explicit transition system of a model");
  oracle->add_option("file", file)->required();
  oracle->add_option("--from", from, "Start state, every entity given")->required();
  oracle->add_option("--query", query, "reach or fixpoint")->check(CLI::IsMember({"reach", "fixpoint"}));
  oracle->add_option("--to", to, "Target literals for reach (empty: any state)");
  oracle->add_option("--bound", bound, "Maximum path length")->capture_default_str();
  auto* repl = app.add_subcommand("repl", "Interactive proof session on a goal file");
  repl->add_option("goalfile", file)->required();
  auto* serve = app.add_subcommand("serve", "Serve the session API over HTTP");
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--examples", examples, "Directory of shipped example scripts")->capture_default_str();
  serve->add_option("--idle-minutes", idle, "Session idle timeout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check_model) return cmd_check_model(io, file);
    if (*compile) return cmd_compile(io, file, out_path);
    if (*prove) return cmd_prove(io, file, out_path);
    if (*autoc) return cmd_auto(io, file, depth, budget, out_path);
    if (*check_cert) return cmd_check_cert(io, file, allow_cut);
    if (*oracle) return cmd_oracle(io, file, from, query, to, bound);
    if (*repl) return cmd_repl(io, file);
    if (*serve) return cmd_serve(io, host, port, examples, idle);
  } catch (const std::exception& e) {
    return io.error(e);
  }
  return 2;
}

}  // namespace hyll
