#ifndef FLUXTUNE_VERSION_HPP
#define FLUXTUNE_VERSION_HPP

namespace fluxtune {

inline constexpr const char* version = "0.1.0";

} // namespace fluxtune

#endif
