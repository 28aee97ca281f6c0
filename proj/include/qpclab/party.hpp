#ifndef QPCLAB_PARTY_HPP
#define QPCLAB_PARTY_HPP

#include <string_view>

namespace qpclab {

enum class Party { Alice, Bob, TP };

inline constexpr std::string_view party_name(Party p) {
    switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::TP: return "tp";
    }
    return "?";
}

} // namespace qpclab

#endif // QPCLAB_PARTY_HPP
