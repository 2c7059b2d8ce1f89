// Copyright 2026 The mfft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "mfft/pipeline/butterfly.hpp"
#include "mfft/pipeline/config.hpp"
#include "mfft/pipeline/delay_line.hpp"
#include "mfft/pipeline/engine.hpp"
#include "mfft/pipeline/shuffler.hpp"
#include "mfft/pipeline/word.hpp"
