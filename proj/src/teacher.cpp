#include "ikl/teacher.hpp"

#include "ikl/errors.hpp"

namespace ikl {

std::optional<BitVector> CachedTeacher::lookup(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return log_[it->second].second;
}

BitVector CachedTeacher::answer(const Word& w) {
    if (auto it = index_.find(w); it != index_.end()) return log_[it->second].second;
    BitVector out = inner_.query(w);
    if (out.width() != inner_.bits()) throw TeacherError("teacher answered with the wrong bit width");
    index_.emplace(w, log_.size());
    log_.emplace_back(w, out);
    return out;
}

} // namespace ikl
