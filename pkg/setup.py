#!/usr/bin/env python3
"""
rsld-lab setup script
"""
from pathlib import Path

from setuptools import find_packages, setup

here = Path(__file__).parent


def read_requirements():
    """Runtime requirements from requirements.txt, test tools excluded"""
    requirements = []
    for line in (here / 'requirements.txt').read_text().splitlines():
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        if line.split('>=')[0].lower() in ('pytest', 'hypothesis'):
            continue
        requirements.append(line)
    return requirements


setup(
    name='rsld-lab',
    version='0.3.0',
    description='SLD and RSLD resolution over lists and priority goals, with loop checks and a property lab',
    long_description=(here / 'README.md').read_text(encoding='utf-8'),
    long_description_content_type='text/markdown',
    python_requires='>=3.8',
    packages=find_packages(include=['src', 'src.*']),
    py_modules=['main'],
    package_data={'src.viewers': ['highlight/*.json']},
    data_files=[('share/rsld-lab/programs', [str(p.relative_to(here)) for p in sorted((here / 'programs').glob('*.lp'))])],
    install_requires=read_requirements(),
    extras_require={'test': ['pytest>=7.0', 'hypothesis>=6.0']},
    entry_points={'console_scripts': ['rsld=main:main']},
)
