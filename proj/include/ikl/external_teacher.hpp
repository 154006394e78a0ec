#pragma once

#include <string>
#include <sys/types.h>

#include "ikl/teacher.hpp"

namespace ikl {

/// Drives a black-box SUT process over its standard streams.
///
/// Protocol, one line per message:
///   learner -> SUT:  RESET | STEP <symbol> | QUIT
///   SUT -> learner:  OK <bitstring>  |  ERR <message>
///
/// Every query sends RESET followed by one STEP per symbol and answers with
/// the bit vector of the final response. Any protocol violation throws
/// TeacherError; the process is then considered dead.
class ExternalTeacher final : public Teacher {
public:
    /// `command` is run through /bin/sh -c.
    ExternalTeacher(std::string command, Alphabet alphabet, std::size_t bits);
    ~ExternalTeacher() override;

    ExternalTeacher(const ExternalTeacher&) = delete;
    ExternalTeacher& operator=(const ExternalTeacher&) = delete;

    const Alphabet& alphabet() const override { return alphabet_; }
    std::size_t bits() const override { return bits_; }

    /// Outputs observed after RESET and after each STEP of the last query.
    const std::vector<BitVector>& last_trace() const noexcept { return trace_; }

protected:
    BitVector answer(const Word& w) override;

private:
    void send(const std::string& line);
    std::string receive();
    BitVector expect_ok(const std::string& context);
    [[noreturn]] void fail(const std::string& msg);
    void shutdown();

    std::string command_;
    Alphabet alphabet_;
    std::size_t bits_;
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    bool dead_ = false;
    std::vector<BitVector> trace_;
};

} // namespace ikl
