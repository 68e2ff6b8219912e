#include "c2r/util/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <thread>

#include "c2r/error.hpp"

namespace c2r::util {

namespace {

struct Pipe {
    int fd[2] = {-1, -1};
    Pipe() {
        if (::pipe2(fd, O_CLOEXEC) != 0) throw SpawnError(std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fd[0] >= 0) ::close(fd[0]);
        fd[0] = -1;
    }
    void close_write() {
        if (fd[1] >= 0) ::close(fd[1]);
        fd[1] = -1;
    }
};

void ignore_sigpipe_once() {
    static const bool done = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

}  // namespace

ProcessResult run_process(const ProcessSpec& spec) {
    if (spec.argv.empty()) throw SpawnError("empty argv");
    ignore_sigpipe_once();

    Pipe in, out, err, exec_status;
    std::vector<char*> argv;
    for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    const std::string cwd = spec.cwd.string();

    const auto start = std::chrono::steady_clock::now();
    const pid_t pid = ::fork();
    if (pid < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        ::setpgid(0, 0);
        ::signal(SIGPIPE, SIG_DFL);
        ::dup2(in.fd[0], STDIN_FILENO);
        ::dup2(out.fd[1], STDOUT_FILENO);
        ::dup2(err.fd[1], STDERR_FILENO);
        int e = 0;
        if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
            e = errno;
        } else {
            ::execvp(argv[0], argv.data());
            e = errno;
        }
        [[maybe_unused]] auto n = ::write(exec_status.fd[1], &e, sizeof e);
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    in.close_read();
    out.close_write();
    err.close_write();
    exec_status.close_write();

    int child_errno = 0;
    if (::read(exec_status.fd[0], &child_errno, sizeof child_errno) == static_cast<ssize_t>(sizeof child_errno)) {
        ::waitpid(pid, nullptr, 0);
        if (child_errno == ENOENT) throw SpawnError("executable not found: " + spec.argv[0], ENOENT);
        throw SpawnError("cannot execute " + spec.argv[0] + ": " + std::strerror(child_errno), child_errno);
    }

    set_nonblocking(in.fd[1]);
    set_nonblocking(out.fd[0]);
    set_nonblocking(err.fd[0]);

    ProcessResult result;
    std::size_t written = 0;
    if (spec.stdin_text.empty()) in.close_write();
    const auto deadline = start + spec.timeout;
    char buf[65536];

    while (out.fd[0] >= 0 || err.fd[0] >= 0) {
        pollfd fds[3];
        int nfds = 0;
        int idx_out = -1, idx_err = -1, idx_in = -1;
        if (out.fd[0] >= 0) { idx_out = nfds; fds[nfds++] = {out.fd[0], POLLIN, 0}; }
        if (err.fd[0] >= 0) { idx_err = nfds; fds[nfds++] = {err.fd[0], POLLIN, 0}; }
        if (in.fd[1] >= 0) { idx_in = nfds; fds[nfds++] = {in.fd[1], POLLOUT, 0}; }

        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            break;
        }
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        const int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(wait + 1, 1000)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        auto drain = [&](int index, Pipe& p, std::string& sink) {
            if (index < 0 || !(fds[index].revents & (POLLIN | POLLHUP | POLLERR))) return;
            const ssize_t n = ::read(p.fd[0], buf, sizeof buf);
            if (n > 0) sink.append(buf, static_cast<std::size_t>(n));
            else if (n == 0 || (errno != EAGAIN && errno != EINTR)) p.close_read();
        };
        drain(idx_out, out, result.stdout_text);
        drain(idx_err, err, result.stderr_text);
        if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t n = ::write(in.fd[1], spec.stdin_text.data() + written, spec.stdin_text.size() - written);
            if (n > 0) written += static_cast<std::size_t>(n);
            if ((n < 0 && errno != EAGAIN && errno != EINTR) || written == spec.stdin_text.size()) in.close_write();
        }
    }
    in.close_write();

    int status = 0;
    if (result.timed_out) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
    } else {
        // Output pipes closed; the child may still be running (e.g. closed stdout).
        for (;;) {
            const pid_t r = ::waitpid(pid, &status, WNOHANG);
            if (r == pid) break;
            if (std::chrono::steady_clock::now() >= deadline) {
                result.timed_out = true;
                ::kill(-pid, SIGKILL);
                ::waitpid(pid, &status, 0);
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }
    // Reap any stragglers left in the group.
    ::kill(-pid, SIGKILL);

    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.term_signal = WTERMSIG(status);
    result.duration =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return result;
}

ProcessLimiter::ProcessLimiter(std::ptrdiff_t slots) : sem_(std::clamp<std::ptrdiff_t>(slots, 1, 1024)) {}

namespace {
std::unique_ptr<ProcessLimiter>& limiter_storage() {
    static std::unique_ptr<ProcessLimiter> limiter =
        std::make_unique<ProcessLimiter>(std::max(1u, std::thread::hardware_concurrency()));
    return limiter;
}
}  // namespace

void ProcessLimiter::configure(std::ptrdiff_t slots) { limiter_storage() = std::make_unique<ProcessLimiter>(slots); }

ProcessLimiter& ProcessLimiter::global() { return *limiter_storage(); }

TempDir::TempDir(const std::string& prefix) {
    std::string tmpl = (std::filesystem::temp_directory_path() / (prefix + "XXXXXX")).string();
    if (!::mkdtemp(tmpl.data())) throw SpawnError("mkdtemp failed: " + std::string(std::strerror(errno)));
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace c2r::util
