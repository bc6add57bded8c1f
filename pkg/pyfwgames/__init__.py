#!/usr/bin/env python
# -*- coding: utf-8 -*-
# flake8: noqa: F401

"""
Stochastic Frank-Wolfe learners with exploration for potential, Markov potential and
congestion games, with exact evaluation oracles.

.. currentmodule:: pyfwgames
"""

from ._version import __version__, __release__
