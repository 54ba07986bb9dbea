#ifndef HYLL_SCRIPT_HPP
#define HYLL_SCRIPT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyll/biomodel.hpp"
#include "hyll/prover.hpp"

namespace hyll {

// A failure while running a script line. kind() is the underlying tactic
// error; line() is the 1-based script line.
class ScriptError : public Error {
 public:
  ScriptError(ErrorKind kind, int line, const std::string& msg);
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

struct ScriptStep {
  int line = 0;
  std::string text;
};

// Header directives, in any order before the first proof line:
//   model <path>                       compile a .bio file; relative to the script
//   let <name> := <formula>            abbreviation
//   tactic <name>(<params>) := <expr>  tactic macro
//   goal [<label>]: <sequent>          one root goal
//   prop <op> [<k>] over model [given <formula>]: <formula>[, <formula>]
// Indented lines continue the previous directive. Every later non-blank line
// is one tactic expression; `--` starts a comment.
struct ProofScript {
  std::shared_ptr<ProverContext> ctx = std::make_shared<ProverContext>();
  std::optional<BioModel> model;
  std::optional<CompiledModel> compiled;
  TacticMacros macros;
  std::vector<Sequent> goals;
  std::vector<std::string> goal_labels;
  std::vector<ScriptStep> steps;
  // Header text with continuation lines joined; used to write transcripts.
  std::vector<std::string> header;
};

ProofScript parse_script(const std::string& text, const std::string& base_dir = ".");
ProofScript load_script(const std::string& path);

// Installs the compiled model into ctx: labels rule1..N, wd0, wd1, the
// fireable families, one case per rule, the zone alias `system` and the
// formula macro dont_care(x).
void install_model(ProverContext& ctx, const CompiledModel& c);

ProofState start_session(const ProofScript& s);
// Runs every step against the first open goal. Throws ScriptError.
ProofState run_steps(const ProofScript& s);
// run_steps followed by extraction; incomplete proofs throw ScriptError with
// OpenGoals at the last line.
Certificate run_script(const ProofScript& s);
// Tactic lines against a single goal.
Certificate run_script(const std::string& tactics, const Sequent& goal,
                       std::shared_ptr<const ProverContext> ctx = std::make_shared<ProverContext>());

// Interactive session over a script header with undo history.
class Session {
 public:
  explicit Session(ProofScript script);
  const ProofState& state() const { return history_.back(); }
  const ProofScript& script() const { return script_; }
  const std::vector<std::string>& tactics() const { return tactics_; }
  // Applies to the given open goal, or the first. Throws on failure; the
  // state is then unchanged.
  void apply(const std::string& tactic, std::optional<int> goal = std::nullopt);
  bool undo();
  // Header plus the applied tactics, one per line: a replayable script.
  // Steps aimed at a goal other than the first cannot be written this way
  // and are reported by replayable().
  std::string transcript() const;
  bool replayable() const;

 private:
  ProofScript script_;
  std::vector<ProofState> history_;
  std::vector<std::string> tactics_;
  std::vector<bool> off_front_;
};

// Whether the ⊕R choice under the node is the fireable branch: an oplusR1
// (oplusR2) applied to a goal of the form (f & B) + n.
std::vector<bool> guarded_choices(const Derivation& d);

}  // namespace hyll

#endif
