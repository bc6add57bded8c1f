#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This module contains project version information.

.. currentmodule:: pyfwgames._version
"""

__version__ = "0.1.0"  #: the working version
__release__ = "0.1.0"  #: the release version
