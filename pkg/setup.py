from setuptools import setup

with open('README.md') as f:
    long_description = f.read()

setup(name='CuckooRec',
      version='0.1.0',
      description='Python library for collisionless embedding tables and online training of recommendation models',
      long_description=long_description,
      long_description_content_type="text/markdown",
      url='https://github.com/defipy-devs/cuckoorec',
      author = "icmoore",
      author_email = "defipy.devs@gmail.com",
        license="MIT",
        package_dir = {"cuckoorec": "python/prod"},
        packages=[
            "cuckoorec",
            "cuckoorec.store",
            "cuckoorec.store.counter",
            "cuckoorec.store.tools",
            "cuckoorec.model",
            "cuckoorec.model.tools",
            "cuckoorec.ps",
            "cuckoorec.sync",
            "cuckoorec.joiner",
            "cuckoorec.joiner.tools",
            "cuckoorec.data",
            "cuckoorec.trainer",
            "cuckoorec.cli",
            "cuckoorec.utils",
            "cuckoorec.enums"
        ],
        install_requires=['numpy',
                          'pandas',
                          'tqdm',
                          'coloredlogs',
                          'xxhash'],
        extras_require={'test': ['pytest']},
        entry_points={'console_scripts': ['cuckoorec = cuckoorec.cli.main:console_entry']},
        python_requires='>=3.10',
        include_package_data=True,
        zip_safe=False,
    )
