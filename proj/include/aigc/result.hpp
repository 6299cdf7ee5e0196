// Copyright 2026 The aigc-chain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>
#include <utility>
#include <variant>

namespace aigc {

/// Error codes shared by every module. Each operation documents the subset it can return.
enum class Errc {
  // ledger
  BadSignature,
  DuplicateTx,
  MalformedPayload,
  BadLink,
  BadHash,
  BadProducer,
  InvalidTxInBlock,
  OverspendInBlock,
  MissingSettlement,
  DecodeFailure,
  // consensus
  InsufficientBalance,
  AlreadyLocked,
  NoValidators,
  NotScheduled,
  UnknownValidator,
  InvalidAmount,
  BadEvidence,
  // registry
  DuplicateIndex,
  ZeroExpiration,
  UnknownProduct,
  InsufficientDeposit,
  NotOwner,
  HashMismatch,
  // htl
  ExpirationInPast,
  BadPreimage,
  NotLocked,
  PastExpiration,
  NotYetExpired,
  UnknownContract,
  CounterpartMissing,
  // reputation
  AllDenied,
  // sim
  ConfigInvalid,
  IoFailure,
};

std::string_view to_string(Errc e) noexcept;

/// Minimal value-or-error holder; std::expected is not available in C++20.
template <class T>
class [[nodiscard]] Expected {
 public:
  Expected(T value) : v_(std::move(value)) {}
  Expected(Errc err) : v_(err) {}

  bool has_value() const noexcept { return v_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  T& value() & { return std::get<0>(v_); }
  const T& value() const& { return std::get<0>(v_); }
  T&& value() && { return std::get<0>(std::move(v_)); }
  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  Errc error() const { return std::get<1>(v_); }

 private:
  std::variant<T, Errc> v_;
};

/// Success-or-error for operations that only mutate.
class [[nodiscard]] Status {
 public:
  Status() = default;
  Status(Errc err) : err_(err), ok_(false) {}

  static Status ok() { return {}; }

  bool has_value() const noexcept { return ok_; }
  explicit operator bool() const noexcept { return ok_; }
  Errc error() const noexcept { return err_; }

 private:
  Errc err_{};
  bool ok_ = true;
};

}  // namespace aigc
