#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <string>

#include "cmlhdc/error.hpp"

namespace testing_support {

inline cmlhdc::ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const cmlhdc::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return cmlhdc::ErrorKind::io_error;
}

inline std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const cmlhdc::Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected an Error";
  return {};
}

}  // namespace testing_support
