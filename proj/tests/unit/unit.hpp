// Copyright 2026 The vibraverify Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <doctest.h>

#include "test_support.hpp"
#include "vibraverify/error.hpp"

#define CHECK_ERROR_CODE(expr, expected)                                   \
  do {                                                                     \
    bool vv_thrown_ = false;                                               \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const ::vibraverify::Error& vv_e_) {                          \
      vv_thrown_ = true;                                                   \
      CHECK_MESSAGE(vv_e_.code() == (expected), vv_e_.what());             \
    }                                                                      \
    CHECK_MESSAGE(vv_thrown_, "expected an error from " #expr);            \
  } while (false)

#define CHECK_PROPERTY(result)                                             \
  do {                                                                     \
    const auto vv_r_ = (result);                                           \
    INFO(vv_r_.name);                                                      \
    INFO(vv_r_.first_failure);                                             \
    CHECK(vv_r_.cases >= 100);                                             \
    CHECK(vv_r_.failures == 0);                                            \
  } while (false)
