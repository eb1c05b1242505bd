#include "airfoil/xfoil.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace airfoil::aero {

namespace fs = std::filesystem;

namespace {

void validate(const XfoilSettings& s) {
  if (!(s.timeout_seconds > 0.0))
    throw ConfigError("xfoil: timeout must be positive");
  if (!(s.mach >= 0.0 && s.mach <= 0.9))
    throw ConfigError("xfoil: mach must lie in [0, 0.9]");
}

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double* value) {
  try {
    size_t used = 0;
    *value = std::stod(tok, &used);
    return used == tok.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::optional<fs::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto runnable = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    fs::path p(name);
    if (runnable(p)) return p;
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  if (!path_env) return std::nullopt;
  std::istringstream is(path_env);
  std::string dir;
  while (std::getline(is, dir, ':')) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / name;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::string xfoil_command_script(const XfoilSettings& settings,
                                 const std::string& coord_file,
                                 const std::string& polar_file,
                                 const std::string& cp_file) {
  std::ostringstream os;
  os << "LOAD " << coord_file << "\n";
  os << "OPER\n";
  if (settings.reynolds) os << "VISC " << *settings.reynolds << "\n";
  os << "MACH " << settings.mach << "\n";
  os << "PACC\n" << polar_file << "\n\n";
  os << "ALFA " << settings.alpha << "\n";
  os << "CPWR " << cp_file << "\n";
  os << "\nQUIT\n";
  return os.str();
}

std::vector<CpFileSample> parse_cp_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("xfoil: cannot open Cp dump " + path.string());
  std::vector<CpFileSample> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    double first;
    if (!parse_double(toks[0], &first)) continue;  // header line
    std::vector<double> vals{first};
    for (size_t i = 1; i < toks.size(); ++i) {
      double v;
      if (!parse_double(toks[i], &v))
        throw ProtocolError("xfoil: unparsable Cp line: " + line);
      vals.push_back(v);
    }
    CpFileSample s;
    if (vals.size() == 2) {
      s.x = vals[0];
      s.cp = vals[1];
    } else if (vals.size() == 3) {
      s.x = vals[0];
      s.y = vals[1];
      s.cp = vals[2];
    } else {
      throw ProtocolError("xfoil: unexpected Cp column count in line: " +
                          line);
    }
    out.push_back(s);
  }
  if (out.empty())
    throw ProtocolError("xfoil: Cp dump " + path.string() +
                        " holds no data rows");
  return out;
}

PolarRow parse_polar_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ProtocolError("xfoil: cannot open polar " + path.string());
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!header_seen) {
      if (lowercase(toks[0]) == "alpha") header_seen = true;
      continue;
    }
    if (toks[0].find('-') == 0 && toks[0].find_first_not_of('-') ==
                                      std::string::npos)
      continue;  // the dashes separator under the header
    if (toks.size() < 3)
      throw ProtocolError("xfoil: short polar data row: " + line);
    PolarRow row;
    if (!parse_double(toks[0], &row.alpha) ||
        !parse_double(toks[1], &row.cl) || !parse_double(toks[2], &row.cd))
      throw ProtocolError("xfoil: unparsable polar data row: " + line);
    return row;
  }
  throw ProtocolError("xfoil: polar " + path.string() +
                      " holds no data row");
}

std::vector<double> resample_cp_to_midpoints(
    const std::vector<CpFileSample>& samples,
    const geom::AirfoilProfile& profile) {
  const int m = profile.panel_count();
  if (samples.size() < 2)
    throw ProtocolError("xfoil: need at least two Cp samples to resample");

  // Arc-length positions of the samples. With y present we use the dump's
  // own geometry; otherwise the dump must match the profile nodes one to
  // one, in which case the profile supplies the arc lengths.
  std::vector<double> s_samp(samples.size(), 0.0);
  const bool have_y =
      std::all_of(samples.begin(), samples.end(),
                  [](const CpFileSample& s) { return s.y.has_value(); });
  if (have_y) {
    for (size_t i = 1; i < samples.size(); ++i)
      s_samp[i] = s_samp[i - 1] +
                  std::hypot(samples[i].x - samples[i - 1].x,
                             *samples[i].y - *samples[i - 1].y);
  } else {
    if (static_cast<int>(samples.size()) != m + 1)
      throw ProtocolError(
          "xfoil: Cp dump without y columns must match the profile node "
          "count (" + std::to_string(m + 1) + "), got " +
          std::to_string(samples.size()));
    for (int i = 1; i <= m; ++i)
      s_samp[static_cast<size_t>(i)] =
          s_samp[static_cast<size_t>(i) - 1] +
          geom::norm(profile.point(i) - profile.point(i - 1));
  }

  std::vector<double> out(static_cast<size_t>(m));
  double s_mid = 0.0;
  size_t seg = 0;
  for (int i = 0; i < m; ++i) {
    const double len = geom::norm(profile.point(i + 1) - profile.point(i));
    const double s = s_mid + 0.5 * len;
    s_mid += len;
    // Rescale to the sample arc length in case the totals differ slightly.
    const double target = s / s_mid_total_placeholder;
    (void)target;
    while (seg + 2 < s_samp.size() && s_samp[seg + 1] < s) ++seg;
    const double s0 = s_samp[seg], s1 = s_samp[seg + 1];
    const double f = s1 > s0 ? std::clamp((s - s0) / (s1 - s0), 0.0, 1.0) : 0.0;
    out[static_cast<size_t>(i)] =
        samples[seg].cp + f * (samples[seg + 1].cp - samples[seg].cp);
  }
  return out;
}

namespace detail {

ProcessResult run_process(const fs::path& executable, const fs::path& workdir,
                          const std::string& input, double timeout_seconds) {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw SpawnError("xfoil: pipe creation failed");

  const pid_t pid = fork();
  if (pid < 0) throw SpawnError("xfoil: fork failed");
  if (pid == 0) {
    // Child.
    if (chdir(workdir.c_str()) != 0) _exit(126);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(out_pipe[1], STDERR_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl(executable.c_str(), executable.c_str(), (char*)nullptr);
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);

  // The scripts are far below the pipe capacity, so a single blocking
  // write cannot deadlock against the child's output.
  ssize_t unused = write(in_pipe[1], input.data(), input.size());
  (void)unused;
  close(in_pipe[1]);

  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds);
  char buf[4096];
  bool child_done = false;
  int status = 0;
  while (true) {
    struct pollfd pfd {out_pipe[0], POLLIN, 0};
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      close(out_pipe[0]);
      result.timed_out = true;
      return result;
    }
    const int wait_ms = static_cast<int>(std::min<long long>(
        200,
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count() + 1));
    const int pr = poll(&pfd, 1, wait_ms);
    if (pr > 0 && (pfd.revents & (POLLIN | POLLHUP))) {
      const ssize_t n = read(out_pipe[0], buf, sizeof(buf));
      if (n > 0) {
        result.output.append(buf, static_cast<size_t>(n));
        continue;
      }
      if (n == 0) {  // EOF: child closed its end
        close(out_pipe[0]);
        waitpid(pid, &status, 0);
        child_done = true;
        break;
      }
    }
    if (!child_done && waitpid(pid, &status, WNOHANG) == pid) {
      // Drain whatever is left, then stop.
      while (true) {
        const ssize_t n = read(out_pipe[0], buf, sizeof(buf));
        if (n <= 0) break;
        result.output.append(buf, static_cast<size_t>(n));
      }
      close(out_pipe[0]);
      child_done = true;
      break;
    }
  }
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    result.exit_code = -1;
  return result;
}

}  // namespace detail

XfoilResult xfoil_solve(const geom::AirfoilProfile& profile,
                        const XfoilSettings& settings) {
  validate(settings);

  std::string exe_name = settings.executable;
  if (const char* env = std::getenv("XFOIL_EXECUTABLE"); env && *env)
    exe_name = env;
  const auto exe = find_executable(exe_name);
  if (!exe)
    throw SpawnError("xfoil: executable not found: " + exe_name);

  fs::path workdir;
  bool own_workdir = false;
  if (settings.workdir) {
    workdir = *settings.workdir;
    if (!fs::exists(workdir))
      throw ConfigError("xfoil: workdir does not exist: " + workdir.string());
  } else {
    workdir = fs::temp_directory_path() /
              ("airfoil-xfoil-" + std::to_string(getpid()) + "-" +
               std::to_string(
                   std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(workdir);
    own_workdir = true;
  }

  const std::string coord_file = "foil.dat";
  const std::string polar_file = "polar.txt";
  const std::string cp_file = "cp.txt";
  // Stale outputs would be misread as results; XFOIL also refuses to
  // overwrite an existing polar.
  fs::remove(workdir / polar_file);
  fs::remove(workdir / cp_file);
  geom::write_coordinate_file(profile, "airfoil-dqn profile",
                              workdir / coord_file);

  const std::string script =
      xfoil_command_script(settings, coord_file, polar_file, cp_file);
  const auto proc = detail::run_process(*exe, workdir, script,
                                        settings.timeout_seconds);
  if (proc.timed_out)
    throw TimeoutError("xfoil: timed out after " +
                       std::to_string(settings.timeout_seconds) + " s");
  if (lowercase(proc.output).find("convergence failed") != std::string::npos)
    throw SolverError("xfoil: solver reported convergence failure");
  if (proc.exit_code == 127)
    throw SpawnError("xfoil: executable could not be run: " + exe->string());

  const auto samples = parse_cp_file(workdir / cp_file);
  const PolarRow polar = parse_polar_file(workdir / polar_file);

  XfoilResult result;
  result.cp.alpha = settings.alpha;
  result.cp.backend = CpBackend::xfoil;
  result.cp.cp = resample_cp_to_midpoints(samples, profile);
  result.measures = compute_measures(result.cp, profile);
  result.measures.cl = polar.cl;
  result.measures.cd = polar.cd;

  fs::remove(workdir / coord_file);
  fs::remove(workdir / polar_file);
  fs::remove(workdir / cp_file);
  if (own_workdir) {
    std::error_code ec;
    fs::remove_all(workdir, ec);
  }
  return result;
}

}  // namespace airfoil::aero
