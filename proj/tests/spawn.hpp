#pragma once

// Runs the CLI through the shell and captures exit code, stdout and stderr.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace spawn {

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// `args` is appended verbatim; `cwd` empty keeps the current directory.
inline Result run(const std::string& exe, const std::string& args, const std::string& cwd = {}) {
  static int counter = 0;
  const auto err_path = std::filesystem::temp_directory_path() /
                        ("macroball_spawn_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".err");
  std::string cmd = "env -u MACROBALL_CONFIG ";
  if (!cwd.empty()) cmd = "cd " + quote(cwd) + " && " + cmd;
  cmd += quote(exe) + " " + args + " 2>" + quote(err_path.string());

  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err(err_path);
  std::ostringstream ss;
  ss << err.rdbuf();
  r.err = ss.str();
  std::filesystem::remove(err_path);
  return r;
}

}  // namespace spawn
