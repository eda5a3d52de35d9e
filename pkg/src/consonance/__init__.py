'''
Musical consonance as the cosine similarity of modelled tones.
'''
