# Copyright 2026 The rqinfra Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regulator and principal-ideal algorithms for real quadratic fields."""

import json

from . import _core
from ._core import CapExceeded, InputError, build_id

__all__ = [
    "CapExceeded",
    "InputError",
    "build_id",
    "cf_recover",
    "is_reduced",
    "principal_cycle",
    "reduce",
    "reduced_forms",
    "regulator_classical",
    "rho",
    "rho_inv",
    "run",
]


def reduced_forms(disc):
    return _core.reduced_forms(str(disc))


def rho(form):
    return _core.rho(form)


def rho_inv(form):
    return _core.rho_inv(form)


def is_reduced(form):
    return _core.is_reduced(form)


def reduce(form):
    """(reduced form, number of rho steps)."""
    return _core.reduce(form)


def principal_cycle(disc):
    """([(form, distance), ...] over forms with a > 0, R+)."""
    return _core.principal_cycle(str(disc))


def regulator_classical(disc, bits=64):
    return _core.regulator_classical(str(disc), bits)


def cf_recover(y1, y2, q):
    z = _core.cf_recover(str(y1), str(y2), str(q))
    return None if z is None else (int(z[0]), int(z[1]))


def run(command, **config):
    """Run a CLI subcommand in process; returns (exit_code, report dict)."""
    code, text = _core.run_json(command, json.dumps(config))
    return code, json.loads(text)
