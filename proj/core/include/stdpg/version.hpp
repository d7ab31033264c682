#ifndef STDPG_VERSION_HPP
#define STDPG_VERSION_HPP

namespace stdpg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stdpg

#endif  // STDPG_VERSION_HPP
