#include "ikl/external_teacher.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "ikl/errors.hpp"

namespace ikl {

ExternalTeacher::ExternalTeacher(std::string command, Alphabet alphabet, std::size_t bits)
    : command_(std::move(command)), alphabet_(std::move(alphabet)), bits_(bits) {
    if (bits_ == 0) throw InputError("external teacher needs a positive bit width");
    // A dead SUT must surface as EPIPE on write, not kill the learner.
    std::signal(SIGPIPE, SIG_IGN);

    int in_pipe[2], out_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0) throw TeacherError(std::string("pipe: ") + std::strerror(errno));
    if (pipe2(out_pipe, O_CLOEXEC) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw TeacherError(std::string("pipe: ") + std::strerror(errno));
    }
    pid_ = fork();
    if (pid_ < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
        throw TeacherError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

ExternalTeacher::~ExternalTeacher() {
    if (!dead_ && to_child_ >= 0) {
        const char quit[] = "QUIT\n";
        [[maybe_unused]] auto n = write(to_child_, quit, sizeof(quit) - 1);
    }
    shutdown();
}

void ExternalTeacher::shutdown() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) == 0) {
            // Give a well-behaved SUT a moment to see QUIT / EOF.
            for (int i = 0; i < 50 && waitpid(pid_, &status, WNOHANG) == 0; ++i) usleep(2000);
            if (waitpid(pid_, &status, WNOHANG) == 0) {
                kill(pid_, SIGKILL);
                waitpid(pid_, &status, 0);
            }
        }
        pid_ = -1;
    }
}

void ExternalTeacher::fail(const std::string& msg) {
    dead_ = true;
    shutdown();
    throw TeacherError("SUT '" + command_ + "': " + msg);
}

void ExternalTeacher::send(const std::string& line) {
    std::string data = line + '\n';
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
        ssize_t n = write(to_child_, p, left);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("write failed: ") + std::strerror(errno));
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
}

std::string ExternalTeacher::receive() {
    for (;;) {
        if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
            std::string line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        char chunk[4096];
        ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("read failed: ") + std::strerror(errno));
        }
        if (n == 0) fail("stream closed mid-query");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

BitVector ExternalTeacher::expect_ok(const std::string& context) {
    std::string line = receive();
    if (line.rfind("ERR", 0) == 0) fail(context + ": SUT reported error: " + line);
    if (line.rfind("OK ", 0) != 0) fail(context + ": malformed response '" + line + "'");
    std::string bits = line.substr(3);
    while (!bits.empty() && bits.back() == ' ') bits.pop_back();
    if (bits.size() != bits_) {
        fail(context + ": expected " + std::to_string(bits_) + " bits, got '" + bits + "'");
    }
    try {
        return BitVector::from_string(bits);
    } catch (const InputError&) {
        fail(context + ": malformed bit string '" + bits + "'");
    }
}

BitVector ExternalTeacher::answer(const Word& w) {
    if (dead_) throw TeacherError("SUT '" + command_ + "' is no longer running");
    alphabet_.validate(w);
    trace_.clear();
    send("RESET");
    trace_.push_back(expect_ok("RESET"));
    for (Symbol s : w) {
        send("STEP " + alphabet_[s]);
        trace_.push_back(expect_ok("STEP " + alphabet_[s]));
    }
    return trace_.back();
}

} // namespace ikl
