
from __future__ import absolute_import, division, print_function

import os
from invoke import Collection, task


@task
def clean_docs(ctx):
    ''' Cleans up the docs '''
    print('Cleaning the docs')
    ctx.run("rm -rf docs/_build")


@task
def build_docs(ctx, clean=False):
    ''' Builds the Sphinx docs '''

    if clean:
        print('Cleaning the docs')
        ctx.run("rm -rf docs/_build")

    print('Building the docs')
    ctx.run("sphinx-build -b html docs docs/_build/html", pty=True)


@task
def test(ctx, slow=False):
    ''' Runs the test suite; the corpus sweeps only with --slow '''
    marker = '' if slow else '-m "not slow"'
    ctx.run("py.test tests {0} --cov dl_circumscription --cov-report term-missing".format(marker),
            pty=True)


@task
def lint(ctx):
    ''' Checks style and import order '''
    ctx.run("flake8 dl_circumscription tests")
    ctx.run("isort --check-only --diff dl_circumscription tests")


@task
def clean(ctx):
    ''' Cleans up build and coverage output '''
    print('Cleaning')
    ctx.run("rm -rf htmlcov")
    ctx.run("rm -rf build")
    ctx.run("rm -rf dist")


os.chdir(os.path.dirname(os.path.abspath(__file__)))

ns = Collection(clean, test, lint)
docs = Collection('docs')
docs.add_task(build_docs, 'build')
docs.add_task(clean_docs, 'clean')
ns.add_collection(docs)
