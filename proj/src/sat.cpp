#include "dtfoil/sat.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dtfoil/error.hpp"

namespace dtfoil {

SolverConfig SolverConfig::embedded() { return SolverConfig{}; }

SolverConfig SolverConfig::external(std::string path, std::vector<std::string> args) {
  SolverConfig c;
  c.mode = Mode::External;
  c.path = std::move(path);
  c.args = std::move(args);
  return c;
}

SolverConfig SolverConfig::from_env() {
  const char* p = std::getenv("DTFOIL_SOLVER");
  if (p && *p) return external(p);
  return embedded();
}

namespace {

// Conflict-driven clause learning with two watched literals, first-UIP
// learning, VSIDS branching, phase saving and Luby restarts.
class Cdcl {
 public:
  explicit Cdcl(int num_vars)
      : n_(num_vars),
        value_(static_cast<std::size_t>(num_vars) + 1, -1),
        level_(value_.size(), 0),
        reason_(value_.size(), -1),
        phase_(value_.size(), 0),
        seen_(value_.size(), 0),
        activity_(value_.size(), 0.0),
        heap_pos_(value_.size(), -1),
        watches_(2 * value_.size()) {
    for (int v = 1; v <= n_; ++v) heap_insert(v);
  }

  void add_clause(Clause c) {
    if (!ok_) return;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (Lit l : c)
      if (l > 0 && std::binary_search(c.begin(), c.end(), -l)) return;
    for (Lit l : c)
      if (std::abs(l) > n_ || l == 0) throw SolverError("literal out of range");
    if (c.empty()) {
      ok_ = false;
      return;
    }
    if (c.size() == 1) {
      int v = lit_value(c[0]);
      if (v == 0) ok_ = false;
      else if (v < 0) enqueue(c[0], -1);
      return;
    }
    attach(std::move(c));
  }

  bool solve() {
    if (!ok_) return false;
    if (propagate() >= 0) return false;
    std::uint64_t restart = 0;
    for (;;) {
      std::uint64_t budget = 100 * luby(++restart);
      int r = search(budget);
      if (r == 1) return true;
      if (r == 0) return false;
      backtrack(0);
    }
  }

  std::vector<bool> model() const {
    std::vector<bool> m(value_.size(), false);
    for (int v = 1; v <= n_; ++v) m[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] == 1;
    return m;
  }

 private:
  static std::size_t code(Lit l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0); }

  // 1 true, 0 false, -1 unassigned
  int lit_value(Lit l) const {
    int v = value_[static_cast<std::size_t>(std::abs(l))];
    if (v < 0) return -1;
    return l > 0 ? v : 1 - v;
  }

  void attach(Clause c) {
    int idx = static_cast<int>(clauses_.size());
    watches_[code(c[0])].push_back(idx);
    watches_[code(c[1])].push_back(idx);
    clauses_.push_back(std::move(c));
  }

  void enqueue(Lit l, int reason) {
    auto v = static_cast<std::size_t>(std::abs(l));
    value_[v] = l > 0 ? 1 : 0;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Index of a conflicting clause, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit false_lit = -p;
      auto& ws = watches_[code(false_lit)];
      std::size_t i = 0, j = 0;
      int conflict = -1;
      while (i < ws.size()) {
        int ci = ws[i++];
        Clause& c = clauses_[static_cast<std::size_t>(ci)];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[code(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (lit_value(c[0]) == 0) {
          conflict = ci;
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(c[0], ci);
        }
      }
      ws.resize(j);
      if (conflict >= 0) return conflict;
    }
    return -1;
  }

  void bump(int v) {
    auto u = static_cast<std::size_t>(v);
    activity_[u] += inc_;
    if (activity_[u] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      inc_ *= 1e-100;
    }
    if (heap_pos_[u] >= 0) heap_up(heap_pos_[u]);
  }

  void analyze(int confl, Clause& learnt, int& back_level) {
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = 0;
    std::size_t idx = trail_.size();
    int current = static_cast<int>(trail_lim_.size());
    for (;;) {
      const Clause& c = clauses_[static_cast<std::size_t>(confl)];
      for (std::size_t k = (p == 0 ? 0 : 1); k < c.size(); ++k) {
        Lit q = c[k];
        auto v = static_cast<std::size_t>(std::abs(q));
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(static_cast<int>(v));
        if (level_[v] >= current) ++pending;
        else learnt.push_back(q);
      }
      do p = trail_[--idx];
      while (!seen_[static_cast<std::size_t>(std::abs(p))]);
      auto pv = static_cast<std::size_t>(std::abs(p));
      seen_[pv] = 0;
      if (--pending == 0) break;
      confl = reason_[pv];
      // reason clauses keep the implied literal first
      const Clause& rc = clauses_[static_cast<std::size_t>(confl)];
      if (rc[0] != p) {
        Clause& m = clauses_[static_cast<std::size_t>(confl)];
        for (std::size_t k = 1; k < m.size(); ++k)
          if (m[k] == p) std::swap(m[0], m[k]);
      }
    }
    learnt[0] = -p;
    back_level = 0;
    std::size_t max_i = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      int l = level_[static_cast<std::size_t>(std::abs(learnt[k]))];
      if (l > back_level) {
        back_level = l;
        max_i = k;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    for (Lit l : learnt) seen_[static_cast<std::size_t>(std::abs(l))] = 0;
    inc_ /= 0.95;
  }

  void backtrack(int level) {
    if (static_cast<int>(trail_lim_.size()) <= level) return;
    std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
    for (std::size_t k = trail_.size(); k > stop; --k) {
      Lit l = trail_[k - 1];
      auto v = static_cast<std::size_t>(std::abs(l));
      phase_[v] = l > 0;
      value_[v] = -1;
      reason_[v] = -1;
      if (heap_pos_[v] < 0) heap_insert(static_cast<int>(v));
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
  }

  // 1 sat, 0 unsat, -1 restart
  int search(std::uint64_t budget) {
    std::uint64_t conflicts = 0;
    Clause learnt;
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        if (trail_lim_.empty()) return 0;
        ++conflicts;
        int back = 0;
        analyze(confl, learnt, back);
        backtrack(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int idx = static_cast<int>(clauses_.size());
          attach(learnt);
          enqueue(learnt[0], idx);
        }
        continue;
      }
      if (conflicts >= budget) return -1;
      int v = 0;
      while (!heap_.empty()) {
        int top = heap_pop();
        if (value_[static_cast<std::size_t>(top)] < 0) {
          v = top;
          break;
        }
      }
      if (v == 0) return 1;
      trail_lim_.push_back(trail_.size());
      enqueue(phase_[static_cast<std::size_t>(v)] ? v : -v, -1);
    }
  }

  static std::uint64_t luby(std::uint64_t i) {
    std::uint64_t k = 1;
    while ((1ull << k) - 1 < i) ++k;
    while (i != (1ull << k) - 1) {
      i -= (1ull << (k - 1)) - 1;
      k = 1;
      while ((1ull << k) - 1 < i) ++k;
    }
    return 1ull << (k - 1);
  }

  bool heap_less(int a, int b) const {
    double x = activity_[static_cast<std::size_t>(a)], y = activity_[static_cast<std::size_t>(b)];
    return x != y ? x > y : a < b;
  }
  void heap_set(std::size_t i, int v) {
    heap_[i] = v;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_up(int pos) {
    auto i = static_cast<std::size_t>(pos);
    int v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_set(i, heap_[parent]);
      i = parent;
    }
    heap_set(i, v);
  }
  void heap_down(std::size_t i) {
    int v = heap_[i];
    for (;;) {
      std::size_t l = 2 * i + 1;
      if (l >= heap_.size()) break;
      std::size_t best = l;
      if (l + 1 < heap_.size() && heap_less(heap_[l + 1], heap_[l])) best = l + 1;
      if (!heap_less(heap_[best], v)) break;
      heap_set(i, heap_[best]);
      i = best;
    }
    heap_set(i, v);
  }
  void heap_insert(int v) {
    heap_.push_back(v);
    heap_up(static_cast<int>(heap_.size() - 1));
  }
  int heap_pop() {
    int top = heap_[0];
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[static_cast<std::size_t>(last)] = 0;
      heap_down(0);
    }
    return top;
  }

  int n_;
  bool ok_ = true;
  std::vector<int> value_, level_, reason_;
  std::vector<char> phase_, seen_;
  std::vector<double> activity_;
  double inc_ = 1.0;
  std::vector<int> heap_, heap_pos_;
  std::vector<std::vector<int>> watches_;
  std::vector<Clause> clauses_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
};

std::filesystem::path temp_cnf(const std::filesystem::path& dir) {
  static std::atomic<std::uint64_t> counter{0};
  auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  return dir / ("dtfoil-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" +
                std::to_string(counter++) + ".cnf");
}

SatVerdict solve_external(const Cnf& cnf, const SolverConfig& config) {
  if (config.timeout <= 0) throw SolverError("solver timeout must be positive");
  if (config.path.empty() || ::access(config.path.c_str(), X_OK) != 0)
    throw SolverError("solver binary not found: '" + config.path + "'");
  std::filesystem::path file = temp_cnf(config.workdir);
  {
    std::ofstream out(file);
    if (!out) throw SolverError("cannot write " + file.string());
    write_dimacs(cnf, out);
    if (!out) throw SolverError("cannot write " + file.string());
  }
  int fds[2];
  if (::pipe(fds) != 0) throw SolverError("pipe failed");
  std::vector<std::string> argv_s{config.path};
  argv_s.insert(argv_s.end(), config.args.begin(), config.args.end());
  argv_s.push_back(file.string());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw SolverError("fork failed");
  }
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    ::execv(config.path.c_str(), argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  std::string output;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(config.timeout));
  bool timed_out = false;
  char buf[65536];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = ::poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) continue;
    ssize_t got = ::read(fds[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    output.append(buf, static_cast<std::size_t>(got));
  }
  ::close(fds[0]);
  if (timed_out) ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out)
    throw SolverError("solver timed out after " + std::to_string(config.timeout) +
                      " s (CNF kept at " + file.string() + ")");
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  SatVerdict v;
  try {
    if (code == 10) {
      if (output.find("s SATISFIABLE") == std::string::npos)
        throw SolverError("exit code 10 without 's SATISFIABLE'");
      v.sat = true;
      v.model = read_model(output, cnf.num_vars);
    } else if (code == 20) {
      if (output.find("s UNSATISFIABLE") == std::string::npos)
        throw SolverError("exit code 20 without 's UNSATISFIABLE'");
      v.sat = false;
    } else {
      throw SolverError("solver exited with code " + std::to_string(code));
    }
  } catch (const Error& e) {
    throw SolverError(std::string(e.what()) + " (CNF kept at " + file.string() + ")");
  }
  std::error_code ec;
  std::filesystem::remove(file, ec);
  return v;
}

}  // namespace

SatVerdict solve_embedded(const Cnf& cnf) {
  Cdcl solver(cnf.num_vars);
  for (const Clause& c : cnf.clauses) solver.add_clause(c);
  SatVerdict v;
  v.sat = solver.solve();
  if (v.sat) v.model = solver.model();
  return v;
}

SatVerdict solve(const Cnf& cnf, const SolverConfig& config) {
  if (config.mode == SolverConfig::Mode::External) return solve_external(cnf, config);
  return solve_embedded(cnf);
}

PartialInstance decode_var(const SatVerdict& verdict, const CnfBuilder& builder,
                           const std::string& name) {
  if (!verdict.sat) throw Error("cannot decode an unsatisfiable verdict");
  PartialInstance e(builder.dimension());
  for (std::size_t i = 0; i < builder.dimension(); ++i) {
    int set = 0;
    for (Cell s : {Cell::Zero, Cell::One, Cell::Bot}) {
      if (verdict.value(builder.cell(name, i, s))) {
        e[i] = s;
        ++set;
      }
    }
    if (set != 1)
      throw InternalError("exactly-one violated for " + name + " at feature " +
                          std::to_string(i + 1));
  }
  return e;
}

std::map<std::string, PartialInstance> decode(const SatVerdict& verdict, const CnfBuilder& builder) {
  std::map<std::string, PartialInstance> out;
  for (const auto& name : builder.vars())
    if (name.empty() || name[0] != '#') out.emplace(name, decode_var(verdict, builder, name));
  return out;
}

}  // namespace dtfoil
