from typing import List
from setuptools import find_packages, setup

EDITABLE_INSTALL = '-e .'


def get_requirements(file_path: str) -> List[str]:
    '''
    Pinned requirements from requirements.txt, without the editable install line.
    '''
    with open(file_path) as file_obj:
        requirements = [req.strip() for req in file_obj.readlines()]
    return [req for req in requirements if req and req != EDITABLE_INSTALL]


def get_long_description(file_path: str) -> str:
    with open(file_path, encoding='utf-8') as file_obj:
        return file_obj.read()


setup(
    name = 'CrossedModuleTDuality',
    version = '0.1.0',
    author = 'CrossedModuleTDuality developers',
    description = 'Exact checks of crossed-module torus actions, their Brauer classes, T-duals and the twisted Fell bundle',
    long_description = get_long_description('README.md'),
    long_description_content_type = 'text/markdown',
    python_requires = '>=3.10',
    packages = find_packages(exclude=['tests', 'examples', 'examples.*']),
    install_requires = get_requirements('requirements.txt')
)
