#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lockstep/smt/encode.hpp"

namespace lockstep::smt {

struct SolverConfig {
  std::string solver_path = "z3";
  int timeout_ms = 60000;
  std::optional<std::string> dump_dir;  // write emitted scripts here for audit
};

// Resolution order: explicit flag (caller), then the environment, then a
// plain `z3` on PATH.
inline std::string default_solver_path() {
  if (const char* env = std::getenv("LOCKSTEP_SOLVER"); env && *env) return env;
  return "z3";
}

struct SolverVerdict {
  enum class Kind { Valid, Counterexample, Unknown, SolverFailure };
  Kind kind = Kind::SolverFailure;
  std::map<std::string, Value> assignment;  // counterexamples only
  std::string detail;                       // unknown reason / failure detail
  bool timed_out = false;

  bool valid() const { return kind == Kind::Valid; }
  bool counterexample() const { return kind == Kind::Counterexample; }

  std::string kind_name() const {
    switch (kind) {
      case Kind::Valid: return "valid";
      case Kind::Counterexample: return "counterexample";
      case Kind::Unknown: return "unknown";
      case Kind::SolverFailure: return "solver-failure";
    }
    return "?";
  }
};

// One validity query: declarations, the formula to prove, the symbols to read
// back from a counterexample model, and objectives for canonicalizing it.
struct SolverQuery {
  std::shared_ptr<SmtEncoder> encoder;
  std::vector<std::string> decls;  // declare-const + side-condition asserts
  std::string formula;             // Bool term; the driver asserts its negation
  std::vector<std::pair<std::string, Sort>> model_symbols;
  std::vector<std::string> objectives;
  std::string label = "query";
};

namespace detail {

struct ProcessResult {
  enum class Status { Done, Timeout, SpawnFailure } status = Status::SpawnFailure;
  std::string output;
  int exit_code = -1;
};

inline std::string temp_file(const std::string& hint) {
  std::string tmpl = "/tmp/lockstep-" + hint + "-XXXXXX";
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  int fd = mkstemp(buf.data());
  if (fd < 0) throw Error("mkstemp failed");
  close(fd);
  return std::string(buf.data());
}

inline ProcessResult run_process(const std::string& path, const std::string& script_file,
                                 const std::string& out_file, int timeout_ms) {
  ProcessResult result;
  pid_t pid = fork();
  if (pid < 0) return result;
  if (pid == 0) {
    int out_fd = open(out_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (out_fd >= 0) {
      dup2(out_fd, STDOUT_FILENO);
      dup2(out_fd, STDERR_FILENO);
      close(out_fd);
    }
    execlp(path.c_str(), path.c_str(), script_file.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  bool killed = false;
  int status = 0;
  while (true) {
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) return result;
    if (!killed && std::chrono::steady_clock::now() > deadline) {
      kill(pid, SIGKILL);
      killed = true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  if (killed) {
    result.status = ProcessResult::Status::Timeout;
    return result;
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.status = result.exit_code == 127 ? ProcessResult::Status::SpawnFailure : ProcessResult::Status::Done;
  return result;
}

inline std::atomic<unsigned long long> dump_counter{0};

}  // namespace detail

// Deterministic script text for a query. Scripts are bit-exact for fixed
// inputs; the canonicalization pass appends minimization objectives.
inline std::string render_script(const SolverQuery& query, int timeout_ms, bool with_objectives) {
  std::string out;
  out += "; lockstep VC query: " + query.label + "\n";
  out += "(set-option :timeout " + std::to_string(timeout_ms) + ")\n";
  for (const auto& d : query.encoder->sort_decls()) out += d + "\n";
  for (const auto& d : query.decls) out += d + "\n";
  out += "(assert (not " + query.formula + "))\n";
  if (with_objectives)
    for (const auto& o : query.objectives) out += "(minimize " + o + ")\n";
  out += "(check-sat)\n";
  out += "(get-model)\n";
  return out;
}

// Decodes a sat response's model into Values, one per declared symbol.
// Symbols the solver omitted (don't-cares) get their sort's default.
inline std::map<std::string, Value> parse_model(const std::string& output, const SolverQuery& query) {
  auto pos = output.find('\n');
  std::string rest = pos == std::string::npos ? "" : output.substr(pos + 1);
  // Drop non-sexpr noise lines (warnings) before the model.
  std::vector<Sexpr> forms;
  {
    std::string cleaned;
    std::istringstream in(rest);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("WARNING", 0) == 0 || line.rfind("warning", 0) == 0) continue;
      cleaned += line + "\n";
    }
    forms = parse_sexprs(cleaned);
  }

  std::map<std::string, const Sexpr*> defs;
  for (const auto& form : forms) {
    if (form.is_atom) continue;
    size_t start = 0;
    if (!form.items.empty() && form.items[0].is_atom && form.items[0].atom == "model") start = 1;
    for (size_t i = start; i < form.items.size(); ++i) {
      const Sexpr& item = form.items[i];
      if (item.is_atom || item.items.size() < 5) continue;
      if (!(item.items[0].is_atom && item.items[0].atom == "define-fun")) continue;
      if (!item.items[2].items.empty()) continue;  // only 0-ary symbols
      defs[item.items[1].atom] = &item.items.back();
    }
  }

  std::map<std::string, Value> model;
  for (const auto& [name, sort] : query.model_symbols) {
    auto it = defs.find(symbol(name));
    if (it == defs.end()) it = defs.find(name);
    if (it == defs.end()) {
      model[name] = Value::default_of(sort);
      continue;
    }
    model[name] = query.encoder->decode_value(sort, *it->second);
  }
  return model;
}

// Asserts the negation of the query formula and interprets the result:
// unsat proves the formula valid; sat yields a counterexample model
// (re-solved under minimization objectives so the model is canonical);
// unknown and process failures are surfaced, never coerced.
inline SolverVerdict check_validity(const SolverQuery& query, const SolverConfig& config) {
  auto run_phase = [&](bool with_objectives) {
    std::string script = render_script(query, config.timeout_ms, with_objectives);
    std::string script_file;
    if (config.dump_dir) {
      unsigned long long id = detail::dump_counter.fetch_add(1);
      char seq[16];
      std::snprintf(seq, sizeof(seq), "%05llu", id);
      script_file = *config.dump_dir + "/" + seq + "-" + query.label +
                    (with_objectives ? "-canonical" : "") + ".smt2";
    } else {
      script_file = detail::temp_file("q");
    }
    {
      std::ofstream out(script_file);
      out << script;
    }
    std::string out_file = detail::temp_file("out");
    auto result = detail::run_process(config.solver_path, script_file, out_file, config.timeout_ms);
    unlink(out_file.c_str());
    if (!config.dump_dir) unlink(script_file.c_str());
    return result;
  };

  auto status_of = [](const std::string& output) -> std::string {
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
      if (line == "sat" || line == "unsat" || line == "unknown") return line;
    }
    return "";
  };

  SolverVerdict verdict;
  auto first = run_phase(false);
  if (first.status == detail::ProcessResult::Status::SpawnFailure) {
    verdict.kind = SolverVerdict::Kind::SolverFailure;
    verdict.detail = "could not run solver '" + config.solver_path + "'";
    return verdict;
  }
  if (first.status == detail::ProcessResult::Status::Timeout) {
    verdict.kind = SolverVerdict::Kind::Unknown;
    verdict.timed_out = true;
    verdict.detail = "timeout after " + std::to_string(config.timeout_ms) + " ms";
    return verdict;
  }

  std::string status = status_of(first.output);
  if (status == "unsat") {
    verdict.kind = SolverVerdict::Kind::Valid;
    return verdict;
  }
  if (status == "unknown") {
    verdict.kind = SolverVerdict::Kind::Unknown;
    bool canceled = first.output.find("canceled") != std::string::npos ||
                    first.output.find("timeout") != std::string::npos;
    verdict.timed_out = canceled;
    verdict.detail = canceled ? "solver reported timeout" : "solver returned unknown";
    return verdict;
  }
  if (status != "sat") {
    verdict.kind = SolverVerdict::Kind::SolverFailure;
    verdict.detail = "unrecognized solver output: " +
                     first.output.substr(0, std::min<size_t>(first.output.size(), 200));
    return verdict;
  }

  verdict.kind = SolverVerdict::Kind::Counterexample;
  std::string model_output = first.output;
  if (!query.objectives.empty()) {
    auto second = run_phase(true);
    if (second.status == detail::ProcessResult::Status::Done && status_of(second.output) == "sat")
      model_output = second.output;
    // On any canonicalization hiccup the phase-1 model still stands.
  }
  try {
    verdict.assignment = parse_model(model_output, query);
  } catch (const MalformedModel& err) {
    verdict.kind = SolverVerdict::Kind::SolverFailure;
    verdict.detail = err.what();
  }
  return verdict;
}

}  // namespace lockstep::smt
