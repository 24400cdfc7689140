#include "dcv/solver/process.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dcv::solver {

namespace {

constexpr std::size_t kMaxOutput = 64 * 1024 * 1024;
constexpr std::size_t kKeptOutput = 4096;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

class TempFile {
public:
  explicit TempFile(const std::string& content) {
    const char* dir = std::getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/dcv-XXXXXX.smt2";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = mkstemps(buf.data(), 5);
    if (fd < 0) throw std::runtime_error(std::string("cannot create temp file: ") + std::strerror(errno));
    path_ = buf.data();
    std::size_t off = 0;
    while (off < content.size()) {
      ssize_t n = ::write(fd, content.data() + off, content.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        ::close(fd);
        throw std::runtime_error(std::string("cannot write temp file: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() { ::unlink(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

private:
  std::string path_;
};

struct RunOutcome {
  bool spawned = false;
  bool timedOut = false;
  std::string spawnError;
  std::string out;
  int status = 0;
};

RunOutcome runProcess(const std::vector<std::string>& argv, std::chrono::milliseconds timeout) {
  RunOutcome r;
  int outPipe[2], errPipe[2];
  if (pipe2(outPipe, O_CLOEXEC) != 0 || pipe2(errPipe, O_CLOEXEC) != 0) {
    r.spawnError = std::string("pipe: ") + std::strerror(errno);
    return r;
  }
  pid_t pid = fork();
  if (pid < 0) {
    r.spawnError = std::string("fork: ") + std::strerror(errno);
    for (int fd : {outPipe[0], outPipe[1], errPipe[0], errPipe[1]}) ::close(fd);
    return r;
  }
  if (pid == 0) {
    // Own process group so that a timeout also reaches grandchildren.
    setpgid(0, 0);
    int devnull = ::open("/dev/null", O_RDWR);
    dup2(devnull, STDIN_FILENO);
    dup2(outPipe[1], STDOUT_FILENO);
    dup2(devnull, STDERR_FILENO);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    int e = errno;
    ssize_t ignored = ::write(errPipe[1], &e, sizeof e);
    (void)ignored;
    _exit(127);
  }
  setpgid(pid, pid);
  ::close(outPipe[1]);
  ::close(errPipe[1]);

  int execErr = 0;
  ssize_t n = 0;
  do {
    n = ::read(errPipe[0], &execErr, sizeof execErr);
  } while (n < 0 && errno == EINTR);
  ::close(errPipe[0]);
  if (n == sizeof execErr) {
    ::close(outPipe[0]);
    waitpid(pid, nullptr, 0);
    r.spawnError = "cannot execute '" + argv[0] + "': " + std::strerror(execErr);
    return r;
  }
  r.spawned = true;

  auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[65536];
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      r.timedOut = true;
      break;
    }
    pollfd p{outPipe[0], POLLIN, 0};
    int rc = poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (rc < 0 && errno != EINTR) break;
    if (rc <= 0) continue;
    ssize_t got = ::read(outPipe[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    if (r.out.size() < kMaxOutput) r.out.append(buf, static_cast<std::size_t>(got));
  }
  ::close(outPipe[0]);
  if (r.timedOut) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  while (waitpid(pid, &r.status, 0) < 0 && errno == EINTR) {
  }
  // Reap anything left in the group (e.g. a stub's sleeping child).
  kill(-pid, SIGKILL);
  return r;
}

std::optional<bool> decodeBool(const SExpr& s) {
  if (!s.isList && (s.atom == "true" || s.atom == "false")) return s.atom == "true";
  return std::nullopt;
}

} // namespace

std::vector<std::string> defaultFlags(const std::string& path) {
  std::string base = std::filesystem::path(path).filename().string();
  if (base.rfind("z3", 0) == 0) return {"-smt2"};
  if (base.rfind("cvc5", 0) == 0 || base.rfind("cvc4", 0) == 0)
    return {"--lang=smt2", "--produce-models", "--incremental"};
  return {};
}

std::string_view toString(SolverResult::Kind k) {
  switch (k) {
  case SolverResult::Kind::Valid: return "valid";
  case SolverResult::Kind::Invalid: return "invalid";
  case SolverResult::Kind::Unknown: return "unknown";
  case SolverResult::Kind::SpawnError: return "spawn-error";
  case SolverResult::Kind::MalformedOutput: return "malformed-output";
  }
  return "?";
}

SolverResult interpretOutput(const std::string& output, const Script& script) {
  SolverResult r;
  r.output = output.substr(0, kKeptOutput);
  std::istringstream in(output);
  std::string line, answer;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.rfind("(error", 0) == 0) {
      errors.push_back(t);
      continue;
    }
    answer = t;
    break;
  }
  std::string rest;
  std::getline(in, rest, '\0');
  // An error before the answer may have dropped an assertion.
  if (!errors.empty()) answer.clear();
  if (answer == "unsat") {
    r.kind = SolverResult::Kind::Valid;
  } else if (answer == "sat") {
    r.kind = SolverResult::Kind::Invalid;
    auto sexprs = parseSExprs(rest);
    if (sexprs) {
      std::size_t i = 0;
      if (!script.probeTerms.empty() && i < sexprs->size()) {
        const SExpr& vals = (*sexprs)[i++];
        r.probes.assign(script.probeTerms.size(), std::nullopt);
        if (vals.isList && vals.list.size() == script.probeTerms.size())
          for (std::size_t k = 0; k < vals.list.size(); ++k)
            if (vals.list[k].isList && vals.list[k].list.size() == 2)
              r.probes[k] = decodeBool(vals.list[k].list[1]);
      }
      for (; i < sexprs->size(); ++i) {
        Model m = parseModel((*sexprs)[i], script.symbols);
        if (!m.empty()) {
          r.model = std::move(m);
          break;
        }
      }
    }
    if (r.probes.size() != script.probeTerms.size()) r.probes.assign(script.probeTerms.size(), std::nullopt);
  } else if (answer == "unknown") {
    r.kind = SolverResult::Kind::Unknown;
    r.detail = "solver-reported";
  } else {
    r.kind = SolverResult::Kind::MalformedOutput;
    r.detail = errors.empty() ? (answer.empty() ? "empty solver output" : "unexpected answer: " + answer.substr(0, 200))
                              : errors.front().substr(0, 400);
  }
  return r;
}

std::string sanitizeFileName(const std::string& name) {
  std::string out;
  for (char c : name) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "query" : out;
}

SolverResult runScript(const Script& script, const std::string& name, const SolverConfig& cfg) {
  if (cfg.dumpDir) {
    std::filesystem::create_directories(*cfg.dumpDir);
    std::ofstream(*cfg.dumpDir / (sanitizeFileName(name) + ".smt2"), std::ios::binary) << script.text;
  }
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  SolverResult r;
  if (cfg.timeout.count() <= 0) {
    r.kind = SolverResult::Kind::Unknown;
    r.detail = "timeout";
    return r;
  }
  std::vector<std::string> argv{cfg.path};
  auto flags = cfg.flags.empty() ? defaultFlags(cfg.path) : cfg.flags;
  argv.insert(argv.end(), flags.begin(), flags.end());
  try {
    TempFile file(script.text);
    argv.push_back(file.path());
    RunOutcome o = runProcess(argv, cfg.timeout);
    if (!o.spawned) {
      r.kind = SolverResult::Kind::SpawnError;
      r.detail = o.spawnError;
    } else if (o.timedOut) {
      r.kind = SolverResult::Kind::Unknown;
      r.detail = "timeout";
      r.output = o.out.substr(0, kKeptOutput);
    } else {
      r = interpretOutput(o.out, script);
    }
  } catch (const std::exception& e) {
    r.kind = SolverResult::Kind::SpawnError;
    r.detail = e.what();
  }
  r.seconds = elapsed();
  return r;
}

SolverResult check(const Obligation& o, const SolverConfig& cfg) {
  return runScript(emit(cfg.groundQuantifiers ? ground(o, cfg.grounding) : o), o.name, cfg);
}

} // namespace dcv::solver
