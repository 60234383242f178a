#include "eth/settings.hpp"

namespace eth {

namespace {
Truncation g_truncation{};
}

const Truncation &truncation() { return g_truncation; }

TruncationScope::TruncationScope(const Truncation &t) : saved_(g_truncation) { g_truncation = t; }

TruncationScope::~TruncationScope() { g_truncation = saved_; }

} // namespace eth
