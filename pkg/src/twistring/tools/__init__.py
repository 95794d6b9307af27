# Copyright (c) 2024, twistring developers.
# SPDX-License-Identifier: BSD-3-Clause
