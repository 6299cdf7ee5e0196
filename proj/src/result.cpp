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

#include "aigc/result.hpp"

namespace aigc {

std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::BadSignature: return "BadSignature";
    case Errc::DuplicateTx: return "DuplicateTx";
    case Errc::MalformedPayload: return "MalformedPayload";
    case Errc::BadLink: return "BadLink";
    case Errc::BadHash: return "BadHash";
    case Errc::BadProducer: return "BadProducer";
    case Errc::InvalidTxInBlock: return "InvalidTxInBlock";
    case Errc::OverspendInBlock: return "OverspendInBlock";
    case Errc::MissingSettlement: return "MissingSettlement";
    case Errc::DecodeFailure: return "DecodeFailure";
    case Errc::InsufficientBalance: return "InsufficientBalance";
    case Errc::AlreadyLocked: return "AlreadyLocked";
    case Errc::NoValidators: return "NoValidators";
    case Errc::NotScheduled: return "NotScheduled";
    case Errc::UnknownValidator: return "UnknownValidator";
    case Errc::InvalidAmount: return "InvalidAmount";
    case Errc::BadEvidence: return "BadEvidence";
    case Errc::DuplicateIndex: return "DuplicateIndex";
    case Errc::ZeroExpiration: return "ZeroExpiration";
    case Errc::UnknownProduct: return "UnknownProduct";
    case Errc::InsufficientDeposit: return "InsufficientDeposit";
    case Errc::NotOwner: return "NotOwner";
    case Errc::HashMismatch: return "HashMismatch";
    case Errc::ExpirationInPast: return "ExpirationInPast";
    case Errc::BadPreimage: return "BadPreimage";
    case Errc::NotLocked: return "NotLocked";
    case Errc::PastExpiration: return "PastExpiration";
    case Errc::NotYetExpired: return "NotYetExpired";
    case Errc::UnknownContract: return "UnknownContract";
    case Errc::CounterpartMissing: return "CounterpartMissing";
    case Errc::AllDenied: return "AllDenied";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace aigc
