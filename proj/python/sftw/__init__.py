# Copyright 2026 The SFTW Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""FCFS arrival-time game: queue evaluation, equilibria and AIS helpers."""

from sftw._core import (
    best_response_scan,
    calibrate_gamma,
    check_nash,
    completion_times,
    deviation_gain,
    enumerate_orders,
    equilibrium_sets,
    expected_service_order,
    expected_service_time,
    expected_waiting,
    green_profile,
    haversine_km,
    run_cli,
    slack_vector,
    waiting_time,
)

__all__ = [
    "best_response_scan",
    "calibrate_gamma",
    "check_nash",
    "completion_times",
    "deviation_gain",
    "enumerate_orders",
    "equilibrium_sets",
    "expected_service_order",
    "expected_service_time",
    "expected_waiting",
    "green_profile",
    "haversine_km",
    "run_cli",
    "slack_vector",
    "waiting_time",
]
