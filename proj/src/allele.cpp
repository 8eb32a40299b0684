#include "hapview/allele.hpp"

#include "hapview/error.hpp"

namespace hapview {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidBase: return "InvalidBase";
        case ErrorKind::OutOfBounds: return "OutOfBounds";
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::MalformedRecord: return "MalformedRecord";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::DuplicateMeta: return "DuplicateMeta";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::InvalidPattern: return "InvalidPattern";
        case ErrorKind::InvalidThreshold: return "InvalidThreshold";
        case ErrorKind::UnknownReference: return "UnknownReference";
        case ErrorKind::UnknownMeta: return "UnknownMeta";
        case ErrorKind::InvalidGrouping: return "InvalidGrouping";
        case ErrorKind::InvalidStep: return "InvalidStep";
        case ErrorKind::EmptyRender: return "EmptyRender";
        case ErrorKind::InvalidFormat: return "InvalidFormat";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {
std::string compose(ErrorKind kind, const std::string& message, std::optional<std::size_t> line) {
    std::string out(to_string(kind));
    if (line) out += " (line " + std::to_string(*line) + ")";
    if (!message.empty()) out += ": " + message;
    return out;
}
}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(compose(kind, message, line)), kind_(kind), line_(line), detail_(message) {}

std::optional<Base> try_pack_allele(char base) noexcept {
    switch (base) {
        case 'A': case 'a': return Base::A;
        case 'C': case 'c': return Base::C;
        case 'G': case 'g': return Base::G;
        case 'T': case 't': return Base::T;
        default: return std::nullopt;
    }
}

Base pack_allele(char base) {
    if (auto code = try_pack_allele(base)) return *code;
    throw Error(ErrorKind::InvalidBase, std::string("'") + base + "' is not one of A, C, G, T");
}

char unpack_allele(Base code) noexcept {
    static constexpr char letters[4] = {'A', 'C', 'G', 'T'};
    return letters[static_cast<std::uint8_t>(code) & 3u];
}

}  // namespace hapview
