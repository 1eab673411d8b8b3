# encoding: utf-8
#
# setup.py
#

from setuptools import setup

NAME = 'dl-circumscription'
VERSION = '0.1.0dev'

setup()
