# Copyright 2026 The cliqueloc Authors
# SPDX-License-Identifier: Apache-2.0

"""Object-map global localization with maximal-clique inlier extraction."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
