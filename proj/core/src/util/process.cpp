#include "fc/util/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "fc/error.hpp"

extern char** environ;

namespace fc::util {

namespace {

std::vector<std::string> build_environment(const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> merged;
    for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
        std::string entry(*e);
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        merged[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    for (const auto& [k, v] : overrides) {
        merged[k] = v;
    }
    std::vector<std::string> out;
    out.reserve(merged.size());
    for (const auto& [k, v] : merged) {
        out.push_back(k + "=" + v);
    }
    return out;
}

}  // namespace

ProcessResult run_shell(const std::string& command, const ProcessOptions& options) {
    // Everything the child touches is prepared before fork.
    const auto env_strings = build_environment(options.env);
    std::vector<char*> envp;
    envp.reserve(env_strings.size() + 1);
    for (const auto& s : env_strings) {
        envp.push_back(const_cast<char*>(s.c_str()));
    }
    envp.push_back(nullptr);
    const std::string cwd = options.cwd.empty() ? std::string() : options.cwd.string();

    int fds[2];
    if (pipe2(fds, O_CLOEXEC) != 0) {
        throw InfraError(std::string("pipe failed: ") + std::strerror(errno));
    }

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        throw InfraError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) {
            dup2(devnull, STDIN_FILENO);
        }
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) {
            _exit(126);
        }
        const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
        execve("/bin/sh", const_cast<char* const*>(argv), envp.data());
        _exit(127);
    }
    setpgid(pid, pid);
    close(fds[1]);

    ProcessResult result;
    std::array<char, 8192> buf{};
    bool open_pipe = true;
    while (open_pipe) {
        int wait_ms = -1;
        if (options.timeout.count() > 0) {
            const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start);
            const auto left = options.timeout - elapsed;
            if (left.count() <= 0) {
                result.timed_out = true;
                break;
            }
            wait_ms = static_cast<int>(left.count());
        }
        pollfd pfd{fds[0], POLLIN, 0};
        const int rc = poll(&pfd, 1, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (rc == 0) {
            continue;  // loop re-checks the deadline
        }
        const ssize_t n = read(fds[0], buf.data(), buf.size());
        if (n > 0) {
            result.output.append(buf.data(), static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            open_pipe = false;
        }
    }
    if (result.timed_out) {
        kill(-pid, SIGKILL);
    }
    close(fds[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    // Stray grandchildren keep the group alive after sh exits.
    kill(-pid, SIGKILL);
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::optional<std::filesystem::path> find_executable(const std::string& name) {
    if (name.empty()) {
        return std::nullopt;
    }
    if (name.find('/') != std::string::npos) {
        if (access(name.c_str(), X_OK) == 0) {
            return std::filesystem::path(name);
        }
        return std::nullopt;
    }
    const char* path_env = std::getenv("PATH");
    std::string path = path_env != nullptr ? path_env : "/usr/bin:/bin";
    std::size_t pos = 0;
    while (pos <= path.size()) {
        const auto next = path.find(':', pos);
        const auto dir = path.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!dir.empty()) {
            const auto candidate = std::filesystem::path(dir) / name;
            if (access(candidate.c_str(), X_OK) == 0 && !std::filesystem::is_directory(candidate)) {
                return candidate;
            }
        }
        if (next == std::string::npos) {
            break;
        }
        pos = next + 1;
    }
    return std::nullopt;
}

std::string shell_quote(const std::string& arg) {
    std::string out = "'";
    for (char c : arg) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

}  // namespace fc::util
