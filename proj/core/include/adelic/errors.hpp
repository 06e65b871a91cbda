#pragma once

#include <stdexcept>
#include <string>

namespace adelic {

/// Stable machine-readable error categories. The CLI maps these 1:1 onto
/// the "code" field of its error JSON, so renaming a value is a breaking
/// change of the tool interface.
enum class errc {
    parse_error,
    invariant_violation,
    domain_error,
    capacity_exceeded,
    unsupported,
    non_convergence,
    pole,
    not_a_module,
    uncertified_rank,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::parse_error: return "parse_error";
        case errc::invariant_violation: return "invariant_violation";
        case errc::domain_error: return "domain_error";
        case errc::capacity_exceeded: return "capacity_exceeded";
        case errc::unsupported: return "unsupported";
        case errc::non_convergence: return "non_convergence";
        case errc::pole: return "pole";
        case errc::not_a_module: return "not_a_module";
        case errc::uncertified_rank: return "uncertified_rank";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace adelic
