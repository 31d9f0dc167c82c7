#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symboleo
{

// Raised by operations whose failures carry a registry code (E5xx..E8xx).
class Error : public std::runtime_error
{
public:
  Error(std::string_view code, const std::string & message)
  : std::runtime_error(message), code_(code)
  {
  }

  const std::string & code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace symboleo
