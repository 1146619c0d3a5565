#ifndef URNSIM_VERSION_HPP
#define URNSIM_VERSION_HPP

namespace urnsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace urnsim

#endif  // URNSIM_VERSION_HPP
