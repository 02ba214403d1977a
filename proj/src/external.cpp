#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cardxor/cnf.hpp"
#include "cardxor/encode.hpp"
#include "cardxor/error.hpp"
#include "cardxor/solve.hpp"

namespace cardxor {

namespace {

using Clock = std::chrono::steady_clock;

class TempFile {
 public:
  TempFile() {
    std::string dir = "/tmp";
    if (const char* env = std::getenv("TMPDIR"); env && *env) dir = env;
    std::string pattern = dir + "/cardxor-XXXXXX.cnf";
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    const int fd = ::mkstemps(buf.data(), 4);
    if (fd < 0) throw Error(ErrorCode::io_error, "cannot create temporary file in " + dir);
    ::close(fd);
    path_ = buf.data();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string build_command(const std::string& tmpl, const std::string& path) {
  const std::string placeholder = "{cnf}";
  const std::string quoted = shell_quote(path);
  auto pos = tmpl.find(placeholder);
  if (pos == std::string::npos) return tmpl + " " + quoted;
  std::string cmd = tmpl;
  while (pos != std::string::npos) {
    cmd.replace(pos, placeholder.size(), quoted);
    pos = cmd.find(placeholder, pos + quoted.size());
  }
  return cmd;
}

struct ProcessOutput {
  std::string stdout_text;
  int exit_status = -1;  // -1 when killed
  bool timed_out = false;
};

ProcessOutput run_with_timeout(const std::string& cmd, Clock::time_point deadline) {
  int fds[2];
  if (::pipe(fds) != 0)
    throw Error(ErrorCode::spawn_failure, std::string("pipe: ") + std::strerror(errno));
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw Error(ErrorCode::spawn_failure, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);

  ProcessOutput out;
  char buf[4096];
  while (true) {
    const auto now = Clock::now();
    if (now >= deadline) {
      out.timed_out = true;
      break;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    pollfd pfd{fds[0], POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count() + 1, 1000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) continue;
    const ssize_t got = ::read(fds[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    out.stdout_text.append(buf, static_cast<std::size_t>(got));
  }
  ::close(fds[0]);
  if (out.timed_out) ::kill(-pid, SIGKILL);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!out.timed_out && WIFEXITED(status)) out.exit_status = WEXITSTATUS(status);
  return out;
}

bool parse_counter(const std::string& line, const char* key, std::uint64_t& out) {
  // Accepts "c <key> : <number> ..." as printed by CryptoMiniSat and others.
  std::istringstream ss(line);
  std::string c, name, colon;
  if (!(ss >> c >> name) || c != "c" || name != key) return false;
  if (!(ss >> colon)) return false;
  if (colon != ":") {
    ss.clear();
    ss.str(colon);
  }
  std::uint64_t v = 0;
  if (!(ss >> v)) return false;
  out = v;
  return true;
}

}  // namespace

SolveResult solve_external(const CardXorInstance& inst, const EngineConfig& cfg,
                           const EncodingChoice& choice) {
  if (cfg.timeout.count() <= 0) throw Error(ErrorCode::invalid_config, "timeout must be > 0");
  const auto start = Clock::now();

  // An empty XOR with rhs 1 is unsatisfiable whatever the solver says.
  for (std::size_t i = 0; i < inst.m(); ++i) {
    if (inst.xors.rhs.get(i) && inst.xors.rows[i].none()) {
      SolveStats stats;
      stats.elapsed = Clock::now() - start;
      return make_result(inst, SolveStatus::unsat, std::nullopt, stats);
    }
  }
  if (cfg.external_cmd.empty())
    throw Error(ErrorCode::invalid_config, "no external solver command configured");

  TempFile file;
  {
    std::ofstream os(file.path());
    write_dimacs(encode_instance(inst, choice), os);
    if (!os) throw Error(ErrorCode::io_error, "cannot write " + file.path());
  }

  const ProcessOutput proc = run_with_timeout(build_command(cfg.external_cmd, file.path()), start + cfg.timeout);
  SolveStats stats;
  stats.elapsed = Clock::now() - start;
  if (proc.timed_out) return make_result(inst, SolveStatus::timeout, std::nullopt, stats);

  std::optional<SolveStatus> status;
  bool have_values = false;
  BitVec witness(inst.n());
  std::istringstream lines(proc.stdout_text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      std::string verdict = line.substr(2);
      while (!verdict.empty() && (verdict.back() == '\r' || verdict.back() == ' ')) verdict.pop_back();
      if (verdict == "SATISFIABLE")
        status = SolveStatus::sat;
      else if (verdict == "UNSATISFIABLE")
        status = SolveStatus::unsat;
      else if (verdict == "UNKNOWN" || verdict == "INDETERMINATE")
        status = SolveStatus::timeout;
      else
        throw Error(ErrorCode::unparseable_output, "unrecognised status line: " + line);
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      have_values = true;
      std::istringstream ss(line.substr(1));
      long long lit = 0;
      while (ss >> lit) {
        if (lit > 0 && static_cast<std::size_t>(lit) <= inst.n())
          witness.set(static_cast<std::size_t>(lit - 1));
      }
      if (!ss.eof()) throw Error(ErrorCode::unparseable_output, "malformed value line: " + line);
    } else {
      parse_counter(line, "decisions", stats.decisions);
      parse_counter(line, "propagations", stats.propagations);
    }
  }
  if (!status) {
    if (proc.exit_status == 127 || proc.exit_status == 126)
      throw Error(ErrorCode::spawn_failure, "could not run external solver: " + cfg.external_cmd);
    throw Error(ErrorCode::unparseable_output, "external solver printed no status line");
  }
  if (*status == SolveStatus::sat && have_values) {
    if (!is_witness(inst, witness))
      throw Error(ErrorCode::witness_verification, "external witness does not satisfy the instance");
    return make_result(inst, SolveStatus::sat, witness, stats);
  }
  return make_result(inst, *status, std::nullopt, stats);
}

}  // namespace cardxor
